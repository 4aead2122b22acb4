#pragma once

// Rotating-frame model of a coherently driven two-level emitter with one or
// two weakly coupled bosonic sensor modes, and extraction of the filtered
// photon moments.
//
// All rates and frequencies are in units of the emitter decay rate
// gamma_sigma = 1, and all frequencies are offsets from the laser frequency
// (central peak at 0).

#include <array>
#include <cmath>
#include <map>

#include "fcorr/lindblad.hpp"

namespace fcorr {

struct DriveConfig {
    double Omega = 10.0;       // drive amplitude
    double delta_sigma = 0.0;  // emitter-laser detuning
    double pump_P = 0.0;       // incoherent pump rate (sigma+ collapse)

    void validate() const {
        if (Omega < 0.0)
            throw ValidationError("DriveConfig: Omega must be >= 0");
        if (pump_P < 0.0)
            throw ValidationError("DriveConfig: pump_P must be >= 0");
    }
};

/// Default sensor coupling: perturbative corrections scale as epsilon^2
/// (~1e-4 systematic) while fourth-order moments (~epsilon^4) stay well
/// above the noise floor of the linear solve.
inline double default_epsilon(double Gamma) {
    return 1e-2 * std::min(Gamma, 1.0);
}

struct SensorConfig {
    double omega1 = 0.0;  // filter centers, relative to omega_L
    double omega2 = 0.0;
    double Gamma = 1.0;   // filter linewidth (Lorentzian)
    double epsilon = 0.0; // sensor coupling; 0 selects default_epsilon(Gamma)
    int n_max = 2;        // sensor Fock truncation (levels 0..n_max)

    double effective_epsilon() const {
        return epsilon > 0.0 ? epsilon : default_epsilon(Gamma);
    }

    void validate() const {
        if (!(Gamma > 0.0))
            throw ValidationError("SensorConfig: Gamma must be > 0");
        const double eps = effective_epsilon();
        if (!(eps > 0.0) || eps > 0.1 * std::min(Gamma, 1.0) * (1.0 + 1e-12))
            throw ValidationError("SensorConfig: epsilon must satisfy 0 < eps <= 0.1*min(Gamma,1)");
        if (n_max < 2)
            throw ValidationError("SensorConfig: n_max must be >= 2");
    }
};

/// Normally ordered sensor moments up to fourth order, read from the steady
/// state. Keys (p,q,r,s) denote <a1+^p a2+^q a1^r a2^s> with p+q = r+s = 2.
struct MomentTable {
    double n1 = 0.0;
    double n2 = 0.0;
    std::map<std::array<int, 4>, Complex> g4;
    double epsilon_used = 0.0;
    bool converged = true;

    Complex moment(int p, int q, int r, int s) const {
        auto it = g4.find({p, q, r, s});
        if (it != g4.end())
            return it->second;
        it = g4.find({r, s, p, q});
        if (it != g4.end())
            return std::conj(it->second);
        throw ValidationError("MomentTable: moment key not present");
    }
};

/// omega_S = Re sqrt((2 Omega)^2 - (gamma_sigma/4)^2), the Mollow sideband
/// offset at resonance.
inline double mollow_splitting(double Omega) {
    const double radicand = 4.0 * Omega * Omega - 1.0 / 16.0;
    return radicand > 0.0 ? std::sqrt(radicand) : 0.0;
}

/// Rotating-frame Lindblad model of emitter + num_sensors sensors.
/// H = delta_sigma s+s + Omega (s+ + s) + sum_i [ delta_i n_i + eps (a_i+ s + a_i s+) ]
inline LindbladModel build_sensor_model(const DriveConfig& drive,
                                        const SensorConfig& sensors,
                                        int num_sensors) {
    drive.validate();
    sensors.validate();
    if (num_sensors != 1 && num_sensors != 2)
        throw ValidationError("build_sensor_model: num_sensors must be 1 or 2");

    std::vector<int> dims{2};
    for (int i = 0; i < num_sensors; ++i)
        dims.push_back(sensors.n_max + 1);
    HilbertSpace space(dims);

    const double eps = sensors.effective_epsilon();
    const Matrix sm = embed(sigma_minus(), 0, space);
    const Matrix sp = sm.adjoint();

    Matrix H = drive.delta_sigma * (sp * sm) + drive.Omega * (sp + sm);

    LindbladModel model;
    model.space = space;
    model.collapse.push_back({sm, 1.0, "emitter"});

    const double deltas[2] = {sensors.omega1, sensors.omega2};
    for (int i = 0; i < num_sensors; ++i) {
        const Matrix a = embed(annihilation(sensors.n_max + 1), i + 1, space);
        const Matrix ad = a.adjoint();
        H += deltas[i] * (ad * a) + eps * (ad * sm + a * sp);
        model.collapse.push_back({a, sensors.Gamma, "sensor_" + std::to_string(i + 1)});
    }
    if (drive.pump_P > 0.0)
        model.collapse.push_back({sp, drive.pump_P, "pump"});

    model.H = std::move(H);
    return model;
}

namespace detail {

/// All 9 fourth-order moments plus populations from a two-sensor steady state.
inline MomentTable read_moments(const Matrix& rho, const HilbertSpace& space, int n_max) {
    const Matrix a1 = embed(annihilation(n_max + 1), 1, space);
    const Matrix a2 = embed(annihilation(n_max + 1), 2, space);
    const Matrix a1d = a1.adjoint(), a2d = a2.adjoint();

    MomentTable t;
    t.n1 = expectation(a1d * a1, rho).real();
    t.n2 = expectation(a2d * a2, rho).real();
    for (int p = 0; p <= 2; ++p)
        for (int r = 0; r <= 2; ++r) {
            const int q = 2 - p, s = 2 - r;
            Matrix m = identity(space.total());
            for (int k = 0; k < p; ++k) m = m * a1d;
            for (int k = 0; k < q; ++k) m = m * a2d;
            for (int k = 0; k < r; ++k) m = m * a1;
            for (int k = 0; k < s; ++k) m = m * a2;
            t.g4[{p, q, r, s}] = expectation(m, rho);
        }
    return t;
}

/// Compare two tables after dividing out the epsilon scaling; used to
/// certify the epsilon -> 0 limit.
inline bool tables_agree(const MomentTable& a, const MomentTable& b, double rel_tol) {
    auto rel = [](double x, double y) {
        const double scale = std::max({std::abs(x), std::abs(y), 1e-12});
        return std::abs(x - y) / scale;
    };
    const double sa = a.epsilon_used * a.epsilon_used;
    const double sb = b.epsilon_used * b.epsilon_used;
    if (rel(a.n1 / sa, b.n1 / sb) > rel_tol) return false;
    if (rel(a.n2 / sa, b.n2 / sb) > rel_tol) return false;
    // Normalized fourth-order moments are epsilon-free up to O(eps^2).
    const double na = a.n1 * a.n2, nb = b.n1 * b.n2;
    if (!(na > 0.0) || !(nb > 0.0))
        return a.n1 == b.n1 && a.n2 == b.n2; // both vacuum: trivially converged
    for (const auto& [key, va] : a.g4) {
        const Complex vb = b.g4.at(key);
        const double scale = std::max({std::abs(va) / na, std::abs(vb) / nb, 1e-6});
        if (std::abs(va / na - vb / nb) / scale > rel_tol) return false;
    }
    return true;
}

} // namespace detail

/// Steady-state moment table of the two-sensor model. The epsilon -> 0
/// limit is certified by recomputation at epsilon/2 (1e-3 relative on all
/// normalized moments); failure flags the result instead of throwing.
inline MomentTable filtered_moments(const DriveConfig& drive,
                                    const SensorConfig& sensors,
                                    bool certify = true) {
    const LindbladModel model = build_sensor_model(drive, sensors, 2);
    const Matrix rho = steady_state(model);
    MomentTable t = detail::read_moments(rho, model.space, sensors.n_max);
    t.epsilon_used = sensors.effective_epsilon();

    if (certify) {
        SensorConfig half = sensors;
        half.epsilon = t.epsilon_used / 2.0;
        const LindbladModel m2 = build_sensor_model(drive, half, 2);
        MomentTable t2 = detail::read_moments(steady_state(m2), m2.space, half.n_max);
        t2.epsilon_used = half.epsilon;
        t.converged = detail::tables_agree(t, t2, 1e-3);
    }
    return t;
}

/// Cross-correlation g2_Gamma(omega1, omega2) = <a1+a2+a1a2> / (n1 n2).
/// Exactly symmetric under omega1 <-> omega2: the pair is canonicalized
/// before the solve.
inline double g2_cross(const DriveConfig& drive, const SensorConfig& sensors,
                       bool* converged = nullptr) {
    SensorConfig s = sensors;
    if (s.omega1 > s.omega2)
        std::swap(s.omega1, s.omega2);
    const MomentTable t = filtered_moments(drive, s, converged != nullptr);
    if (converged)
        *converged = t.converged;
    if (t.n1 < 1e-30 || t.n2 < 1e-30)
        throw UndefinedCorrelationError("g2_cross: vanishing sensor population");
    return t.moment(1, 1, 1, 1).real() / (t.n1 * t.n2);
}

/// Auto-correlation g2_Gamma(omega, omega) from a single sensor:
/// <a+^2 a^2> / <a+a>^2.
inline double g2_auto(const DriveConfig& drive, double omega, double Gamma,
                      double epsilon = 0.0, int n_max = 2,
                      bool* converged = nullptr) {
    SensorConfig cfg{omega, omega, Gamma, epsilon, n_max};
    cfg.validate();
    drive.validate();

    auto solve_one = [&](double eps) {
        SensorConfig c = cfg;
        c.epsilon = eps;
        const LindbladModel model = build_sensor_model(drive, c, 1);
        const Matrix rho = steady_state(model);
        const Matrix a = embed(annihilation(n_max + 1), 1, model.space);
        const double n = expectation(a.adjoint() * a, rho).real();
        const double m4 = expectation(a.adjoint() * a.adjoint() * a * a, rho).real();
        if (n < 1e-30)
            throw UndefinedCorrelationError("g2_auto: vanishing sensor population");
        return m4 / (n * n);
    };

    const double eps = cfg.effective_epsilon();
    const double g = solve_one(eps);
    if (converged) {
        const double g_half = solve_one(eps / 2.0);
        const double scale = std::max({std::abs(g), std::abs(g_half), 1e-6});
        *converged = std::abs(g - g_half) / scale <= 1e-3;
    }
    return g;
}

/// Filtered spectrum S_Gamma(omega) = <a+a>_ss / epsilon^2 from a single
/// sensor at omega. The collectable signal is Gamma * S_Gamma(omega).
inline double spectrum_point(const DriveConfig& drive, double omega, double Gamma,
                             double epsilon = 0.0, int n_max = 2) {
    SensorConfig cfg{omega, omega, Gamma, epsilon, n_max};
    cfg.validate();
    drive.validate();
    const LindbladModel model = build_sensor_model(drive, cfg, 1);
    const Matrix rho = steady_state(model);
    const Matrix a = embed(annihilation(n_max + 1), 1, model.space);
    const double eps = cfg.effective_epsilon();
    return expectation(a.adjoint() * a, rho).real() / (eps * eps);
}

inline double signal(const DriveConfig& drive, double omega, double Gamma,
                     double epsilon = 0.0) {
    return Gamma * spectrum_point(drive, omega, Gamma, epsilon);
}

} // namespace fcorr
