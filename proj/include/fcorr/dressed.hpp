#pragma once

// Multi-mode dressed-state approximation: the three transition modes of the
// dressed ladder and their zero-delay correlations, for comparison with the
// exact sensor-method results.

#include <array>
#include <limits>

#include "fcorr/lindblad.hpp"
#include "fcorr/sensors.hpp"

namespace fcorr {

/// Dressed-state amplitudes and the bare -> dressed change of basis.
/// Only the resonant case is supported: at delta_sigma = 0 symmetry forces
/// c = s = 1/sqrt(2); the detuned amplitudes are not defined here.
struct DressedBasis {
    double c = 0.0;
    double s = 0.0;
    Matrix transform; // rows: |+>, |-> expressed in {|g>, |e>}

    Matrix plus() const { return transform.row(0).transpose(); }
    Matrix minus() const { return transform.row(1).transpose(); }
};

inline DressedBasis dressed_amplitudes(const DriveConfig& drive) {
    drive.validate();
    if (!(drive.Omega > 0.0))
        throw ValidationError("dressed_amplitudes: no dressing at Omega = 0");
    if (drive.delta_sigma != 0.0)
        throw ValidationError("dressed_amplitudes: detuned dressing not supported");
    DressedBasis b;
    b.c = b.s = 1.0 / std::sqrt(2.0);
    b.transform = Matrix(2, 2);
    b.transform << b.c, b.s, b.c, -b.s;
    return b;
}

/// The three dressed transition modes in the bare basis:
/// s1 = c^2 |-><+|, s2 = c s (|+><+| - |-><-|), s3 = -s^2 |+><-|.
inline std::array<Matrix, 3> dressed_modes(const DressedBasis& b) {
    const Matrix plus = b.plus(), minus = b.minus();
    return {b.c * b.c * minus * plus.adjoint(),
            b.c * b.s * (plus * plus.adjoint() - minus * minus.adjoint()),
            -b.s * b.s * plus * minus.adjoint()};
}

/// Zero-delay dressed-mode correlations in the 2LS steady state.
/// numerator(i, j) = <s_i+ s_j+ s_j s_i> as written; since the modes do not
/// commute, the reversed ordering <s_j+ s_i+ s_i s_j> is numerator(j, i).
struct DressedCorrelators {
    std::array<double, 3> population{};
    Eigen::Matrix3d numerator;
    Eigen::Matrix3d g2;      // Glauber-normalized; NaN where undefined
    double reversed_g2(int i, int j) const { return g2(j, i); }
};

inline DressedCorrelators dressed_correlators(const DriveConfig& drive) {
    const DressedBasis basis = dressed_amplitudes(drive);
    const auto modes = dressed_modes(basis);

    LindbladModel model;
    model.space = HilbertSpace{2};
    model.H = drive.Omega * (sigma_minus().adjoint() + sigma_minus());
    model.collapse.push_back({sigma_minus(), 1.0, "emitter"});
    const Matrix rho = steady_state(model);

    DressedCorrelators out;
    for (int i = 0; i < 3; ++i)
        out.population[i] = expectation(modes[i].adjoint() * modes[i], rho).real();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const Matrix pair = modes[j] * modes[i];
            out.numerator(i, j) = expectation(pair.adjoint() * pair, rho).real();
            const double denom = out.population[i] * out.population[j];
            out.g2(i, j) = denom > 1e-30
                               ? out.numerator(i, j) / denom
                               : std::numeric_limits<double>::quiet_NaN();
        }
    return out;
}

} // namespace fcorr
