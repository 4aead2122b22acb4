#pragma once

// Cauchy-Schwarz ratio R and CHSH Bell parameter B from a table of
// normally ordered fourth-order sensor moments.

#include <cmath>

#include "fcorr/sensors.hpp"

namespace fcorr {

struct AngleSet {
    double theta = 0.0;
    double theta_prime = M_PI / 4.0;
    double phi = M_PI / 8.0;
    double phi_prime = 3.0 * M_PI / 8.0;
};

inline AngleSet standard_angles() { return AngleSet{}; }

struct InequalityResult {
    double value = 0.0;
    bool violated = false;
    double bound = 0.0;        // 1 for CSI, 2 for CHSH
    double quantum_max = 0.0;  // 2*sqrt(2) for CHSH
};

/// Entry validation: inequality outputs are meaningless for unphysical
/// tables, so reject them loudly.
inline void validate_moment_table(const MomentTable& m) {
    if (m.n1 < 0.0 || m.n2 < 0.0)
        throw ValidationError("MomentTable: negative population");
    for (const auto& [key, v] : m.g4) {
        const Complex vc = std::conj(m.moment(key[2], key[3], key[0], key[1]));
        const double scale = std::max({std::abs(v), std::abs(vc), 1e-30});
        if (std::abs(v - vc) / scale > 1e-12)
            throw ValidationError("MomentTable: conjugate symmetry violated");
    }
    const std::array<std::array<int, 4>, 3> diag{{{2, 0, 2, 0}, {0, 2, 0, 2}, {1, 1, 1, 1}}};
    for (const auto& k : diag) {
        const Complex v = m.moment(k[0], k[1], k[2], k[3]);
        if (v.real() < -1e-14 || std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v.real())))
            throw ValidationError("MomentTable: diagonal fourth-order moment not real nonnegative");
    }
}

/// R = [g12]^2 / (g11 g22); the populations cancel and R reduces to
/// <a1+a2+a1a2>^2 / (<a1+^2a1^2> <a2+^2a2^2>).
inline InequalityResult csi_ratio(const MomentTable& m) {
    validate_moment_table(m);
    if (!(m.n1 > 0.0) || !(m.n2 > 0.0))
        throw UndefinedCorrelationError("csi_ratio: vanishing population");
    const double auto1 = m.moment(2, 0, 2, 0).real();
    const double auto2 = m.moment(0, 2, 0, 2).real();
    if (auto1 < 1e-30 || auto2 < 1e-30)
        throw UndefinedCorrelationError("csi_ratio: vanishing autocorrelation");
    const double cross = m.moment(1, 1, 1, 1).real();
    const double R = cross * cross / (auto1 * auto2);
    return {R, R > 1.0, 1.0, 0.0};
}

namespace detail {

// Coefficients of the normally ordered beam-splitter expansion, with
// N = n1 - n2 and X = a1+a2 + a2+a1:
//   :(c1+c1 - c2+c2)(b1+b1 - b2+b2): =
//     cos2t cos2p :N^2: + sin(2t-2p) :NX: - sin2t sin2p :X^2:
struct ChshMoments {
    double nn;   // :N^2:  = <a1+2a12> + <a2+2a2 2> - 2<a1+a2+a1a2>
    double nx;   // :NX:   = 2 Re<a1+2 a1 a2> - 2 Re<a1+a2+ a2^2>
    double xx;   // :X^2:  = 2 Re<a1+2 a2^2> + 2<a1+a2+a1a2>
    double sum;  // :(n1+n2)^2:
};

inline ChshMoments chsh_moments(const MomentTable& m) {
    const double auto1 = m.moment(2, 0, 2, 0).real();
    const double auto2 = m.moment(0, 2, 0, 2).real();
    const double cross = m.moment(1, 1, 1, 1).real();
    const double coh = 2.0 * m.moment(2, 0, 0, 2).real();
    const double transfer = 2.0 * (m.moment(2, 0, 1, 1).real() - m.moment(1, 1, 0, 2).real());
    return {auto1 + auto2 - 2.0 * cross, transfer, coh + 2.0 * cross,
            auto1 + auto2 + 2.0 * cross};
}

} // namespace detail

/// CHSH correlator E(theta, phi) for beam-splitter angles theta, phi.
inline double chsh_E(const MomentTable& m, double theta, double phi) {
    validate_moment_table(m);
    const auto c = detail::chsh_moments(m);
    if (std::abs(c.sum) < 1e-30)
        throw UndefinedCorrelationError("chsh_E: vanishing intensity correlator");
    return (std::cos(2 * theta) * std::cos(2 * phi) * c.nn +
            std::sin(2 * theta - 2 * phi) * c.nx -
            std::sin(2 * theta) * std::sin(2 * phi) * c.xx) / c.sum;
}

/// B = |E(t,p) - E(t,p') + E(t',p') + E(t',p)|, classical bound 2.
inline InequalityResult chsh_B_general(const MomentTable& m, const AngleSet& a = {}) {
    const double B = std::abs(chsh_E(m, a.theta, a.phi) - chsh_E(m, a.theta, a.phi_prime) +
                              chsh_E(m, a.theta_prime, a.phi_prime) +
                              chsh_E(m, a.theta_prime, a.phi));
    return {B, B > 2.0, 2.0, 2.0 * std::sqrt(2.0)};
}

/// Closed form of B at the standard angles (theta=0, phi=pi/8,
/// theta'=pi/4, phi'=3pi/8).
inline InequalityResult chsh_B_standard(const MomentTable& m) {
    validate_moment_table(m);
    const double auto1 = m.moment(2, 0, 2, 0).real();
    const double auto2 = m.moment(0, 2, 0, 2).real();
    const double cross = m.moment(1, 1, 1, 1).real();
    const double coh = m.moment(2, 0, 0, 2).real() + m.moment(0, 2, 2, 0).real();
    const double denom = auto1 + auto2 + 2.0 * cross;
    if (std::abs(denom) < 1e-30)
        throw UndefinedCorrelationError("chsh_B_standard: vanishing denominator");
    const double B = std::sqrt(2.0) * std::abs((auto1 + auto2 - 4.0 * cross - coh) / denom);
    return {B, B > 2.0, 2.0, 2.0 * std::sqrt(2.0)};
}

/// Same as chsh_B_standard but with the two photon-transfer coherences
/// dropped from the numerator. Accurate whenever there is no second-order
/// transfer of photons between the modes.
inline InequalityResult chsh_B_approx(const MomentTable& m) {
    validate_moment_table(m);
    const double auto1 = m.moment(2, 0, 2, 0).real();
    const double auto2 = m.moment(0, 2, 0, 2).real();
    const double cross = m.moment(1, 1, 1, 1).real();
    const double denom = auto1 + auto2 + 2.0 * cross;
    if (std::abs(denom) < 1e-30)
        throw UndefinedCorrelationError("chsh_B_approx: vanishing denominator");
    const double B = std::sqrt(2.0) * std::abs((auto1 + auto2 - 4.0 * cross) / denom);
    return {B, B > 2.0, 2.0, 2.0 * std::sqrt(2.0)};
}

} // namespace fcorr
