#pragma once

// Self-validation suite behind the `validate` CLI subcommand: module
// invariants, the published correlation values, landscape structure, the
// undressed-emitter null result, and Monte Carlo vs deterministic agreement.

#include <random>
#include <vector>

#include "fcorr/dressed.hpp"
#include "fcorr/inequalities.hpp"
#include "fcorr/montecarlo.hpp"
#include "fcorr/scan.hpp"

namespace fcorr {

/// Moments of a random pure two-mode state with at most two photons per
/// mode: physical by construction (conjugate-symmetric, nonnegative
/// diagonals), and exact on the truncated space since all operators in
/// scope only annihilate photons first.
inline MomentTable random_physical_moment_table(std::mt19937_64& rng) {
    HilbertSpace space{3, 3};
    std::normal_distribution<double> gauss(0.0, 1.0);
    Vector psi(9);
    for (int i = 0; i < 9; ++i)
        psi(i) = Complex(gauss(rng), gauss(rng));
    psi.normalize();
    const Matrix rho = psi * psi.adjoint();

    const Matrix a1 = embed(annihilation(3), 0, space);
    const Matrix a2 = embed(annihilation(3), 1, space);
    MomentTable t;
    t.n1 = expectation(a1.adjoint() * a1, rho).real();
    t.n2 = expectation(a2.adjoint() * a2, rho).real();
    for (int p = 0; p <= 2; ++p)
        for (int r = 0; r <= 2; ++r) {
            const int q = 2 - p, s = 2 - r;
            Matrix m = identity(9);
            for (int k = 0; k < p; ++k) m = m * a1.adjoint();
            for (int k = 0; k < q; ++k) m = m * a2.adjoint();
            for (int k = 0; k < r; ++k) m = m * a1;
            for (int k = 0; k < s; ++k) m = m * a2;
            const Complex v = expectation(m, rho);
            // enforce exact conjugate symmetry against rounding in the products
            if (p < r || (p == r && q <= s))
                t.g4[{p, q, r, s}] = v;
        }
    for (int p = 0; p <= 2; ++p)
        for (int r = 0; r <= 2; ++r) {
            const int q = 2 - p, s = 2 - r;
            if (!t.g4.count({p, q, r, s}))
                t.g4[{p, q, r, s}] = std::conj(t.g4.at({r, s, p, q}));
        }
    for (const auto& k : {std::array<int, 4>{2, 0, 2, 0}, {0, 2, 0, 2}, {1, 1, 1, 1}})
        t.g4[k] = Complex(std::max(0.0, t.g4[k].real()), 0.0);
    t.epsilon_used = 1.0;
    return t;
}

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace detail {
inline std::string fmtv(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}
} // namespace detail

inline std::vector<CheckResult> run_validation(int threads = 1) {
    std::vector<CheckResult> results;
    auto report = [&](const std::string& name, bool pass, const std::string& detail) {
        results.push_back({name, pass, detail});
    };
    char buf[256];

    // --- operator algebra invariants ---
    {
        std::mt19937_64 rng(7);
        std::normal_distribution<double> gauss;
        Matrix A(6, 6), B(6, 6);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 6; ++j) {
                A(i, j) = Complex(gauss(rng), gauss(rng));
                B(i, j) = Complex(gauss(rng), gauss(rng));
            }
        const double d1 = ((A * B).adjoint() - B.adjoint() * A.adjoint()).cwiseAbs().maxCoeff();
        const Matrix a = annihilation(5);
        const Matrix num = a.adjoint() * a;
        double d2 = 0.0;
        for (int n = 0; n < 5; ++n)
            d2 = std::max(d2, std::abs(num(n, n) - double(n)));
        report("opalg: (AB)+ = B+A+ and a+a diagonal", d1 < 1e-12 && d2 < 1e-12,
               "max deviations " + detail::fmtv(d1) + ", " + detail::fmtv(d2));
    }

    // --- Liouvillian trace preservation ---
    {
        DriveConfig drive;
        const LindbladModel model = build_sensor_model(drive, {0.0, 5.0, 1.0}, 2);
        const Superoperator L = build_liouvillian(model);
        std::mt19937_64 rng(11);
        std::normal_distribution<double> gauss;
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            Matrix X(18, 18);
            for (int i = 0; i < 18; ++i)
                for (int j = 0; j < 18; ++j)
                    X(i, j) = Complex(gauss(rng), gauss(rng));
            X = (X + Matrix(X.adjoint())).eval();
            worst = std::max(worst, std::abs(L.apply(X).trace()) / X.norm());
        }
        report("lindblad: Tr L(X) = 0 on random Hermitian X", worst < 1e-10,
               "worst |Tr L(X)|/||X|| = " + detail::fmtv(worst));
    }

    // --- steady-state invariants ---
    {
        DriveConfig drive;
        const LindbladModel model = build_sensor_model(drive, {-5.0, 5.0, 1.0}, 2);
        const Matrix rho = steady_state(model);
        const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
        const double tr = std::abs(rho.trace().real() - 1.0);
        Eigen::SelfAdjointEigenSolver<Matrix> es(rho);
        const double min_eig = es.eigenvalues().minCoeff();
        const bool ok = herm < 1e-10 && tr < 1e-10 && min_eig > -1e-8;
        std::snprintf(buf, sizeof buf, "herm %.2e, trace dev %.2e, min eig %.2e", herm, tr, min_eig);
        report("lindblad: steady state is a density matrix", ok, buf);
    }

    // --- the three published g2 values ---
    {
        DriveConfig drive;
        const double wS = mollow_splitting(drive.Omega);
        bool c1 = true, c2 = true, c3 = true;
        const double g_ss = g2_cross(drive, {-wS, wS, 1.0}, &c1);
        const double g_cs = g2_cross(drive, {0.0, wS, 1.0}, &c2);
        const double g_tt = g2_cross(drive, {-25.0, 25.0, 1.0}, &c3);
        const bool ok = std::abs(g_ss - 1.5) < 0.15 && std::abs(g_cs - 0.23) < 0.03 &&
                        std::abs(g_tt - 14.0) < 2.0 && c1 && c2 && c3;
        std::snprintf(buf, sizeof buf,
                      "g2(-wS,wS)=%.4f (1.5), g2(0,wS)=%.4f (0.23), g2(-wT,wT)=%.4f (14)",
                      g_ss, g_cs, g_tt);
        report("sensors: published cross-correlation values", ok, buf);
    }

    // --- epsilon stability ---
    {
        DriveConfig drive;
        const double wS = mollow_splitting(drive.Omega);
        bool conv = false;
        g2_cross(drive, {-wS, wS, 1.0}, &conv);
        report("sensors: epsilon vs epsilon/2 stability", conv,
               conv ? "within 1e-3 relative" : "NOT converged");
    }

    // --- CHSH closed form vs general angles ---
    {
        std::mt19937_64 rng(123);
        double worst = 0.0;
        for (int k = 0; k < 100; ++k) {
            const MomentTable t = random_physical_moment_table(rng);
            worst = std::max(worst,
                             std::abs(chsh_B_standard(t).value - chsh_B_general(t).value));
        }
        report("inequalities: B closed form == general angles", worst < 1e-10,
               "worst |diff| = " + detail::fmtv(worst));
    }

    // --- antidiagonal structure of the CSI landscape ---
    {
        DriveConfig drive;
        const double wS = mollow_splitting(drive.Omega);
        ScanOptions opts;
        opts.threads = threads;
        opts.certify = false;
        const int n = 41;
        const LandscapeGrid g =
            landscape(drive, Quantity::csi_R, {-1.5 * wS, 1.5 * wS, n}, 1.0, opts);
        // Violating cells must concentrate near the three antidiagonals
        // well beyond the uniform-area baseline, and each antidiagonal
        // must actually violate at a representative point. (Weak
        // violations driven by suppressed tail autocorrelations also
        // occur off the antidiagonals, so concentration — not
        // exclusivity — is the meaningful structural statement.)
        int violating = 0, near = 0, cells = 0, near_cells = 0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const double sum = g.axis.at(i) + g.axis.at(j);
                const bool is_near =
                    std::min({std::abs(sum), std::abs(sum - wS), std::abs(sum + wS)}) < 3.0;
                ++cells;
                near_cells += is_near;
                const double v = g.values(i, j);
                if (std::isnan(v) || v <= 1.0)
                    continue;
                ++violating;
                near += is_near;
            }
        const double frac = violating ? double(near) / violating : 0.0;
        const double baseline = double(near_cells) / cells;
        // Line I violates in the tails (leapfrog |+> -> |+> needs
        // frequencies beyond the sidebands); lines II at interior points.
        bool on_lines = true;
        for (auto [w1, w2] : {std::pair{1.25 * wS, -1.25 * wS}, {0.6 * wS, 0.4 * wS},
                              {-0.6 * wS, -0.4 * wS}}) {
            const MomentTable t = filtered_moments(drive, {w1, w2, 1.0}, false);
            on_lines = on_lines && csi_ratio(t).value > 1.0;
        }
        std::snprintf(buf, sizeof buf,
                      "%d/%d violating cells near an antidiagonal (area baseline %.0f%%)",
                      near, violating, 100.0 * baseline);
        report("scan: CSI violation concentrates on the three antidiagonals",
               violating > 0 && frac >= 1.8 * baseline && on_lines, buf);
    }

    // --- undressed emitter never violates ---
    {
        // Degenerate-frequency cells sit at R = 1 exactly in the
        // epsilon -> 0 limit; Richardson extrapolation in epsilon^2
        // removes the O(epsilon^2) finite-coupling excess.
        DriveConfig drive;
        drive.Omega = 0.0;
        drive.pump_P = 1.0;
        double worstR = 0.0, worstB = 0.0;
        const GridSpec grid{-8.0, 8.0, 11};
        for (double G : {0.1, 1.0, 10.0}) {
            std::vector<std::pair<int, int>> cells;
            for (int i = 0; i < grid.count; ++i)
                for (int j = i; j < grid.count; ++j)
                    cells.emplace_back(i, j);
            std::vector<double> Rv(cells.size()), Bv(cells.size());
            detail::parallel_for(cells.size(), threads, [&](std::size_t k) {
                const auto [i, j] = cells[k];
                Rv[k] = Bv[k] = 0.0;
                try {
                    const double eps = default_epsilon(G);
                    SensorConfig c{grid.at(i), grid.at(j), G, eps};
                    const MomentTable t1 = filtered_moments(drive, c, false);
                    c.epsilon = eps / 2.0;
                    const MomentTable t2 = filtered_moments(drive, c, false);
                    Rv[k] = (4.0 * csi_ratio(t2).value - csi_ratio(t1).value) / 3.0;
                    Bv[k] = (4.0 * chsh_B_standard(t2).value - chsh_B_standard(t1).value) / 3.0;
                } catch (const UndefinedCorrelationError&) {
                }
            });
            for (std::size_t k = 0; k < cells.size(); ++k) {
                worstR = std::max(worstR, Rv[k]);
                worstB = std::max(worstB, Bv[k]);
            }
        }
        const bool ok = worstR <= 1.0 + 1e-6 && worstB <= 2.0 + 1e-6;
        std::snprintf(buf, sizeof buf, "max R = %.8f (<=1), max B = %.8f (<=2)", worstR, worstB);
        report("inequalities: incoherently pumped emitter obeys CSI and BI", ok, buf);
    }

    // --- dressed-mode nilpotency diagnosis ---
    {
        DriveConfig drive;
        const auto dc = dressed_correlators(drive);
        const double exact = g2_auto(drive, mollow_splitting(drive.Omega), 1.0);
        const bool ok = dc.numerator(0, 0) == 0.0 && dc.numerator(2, 2) == 0.0 && exact > 0.0;
        std::snprintf(buf, sizeof buf, "dressed sideband autocorrelation %.1e, exact %.4f",
                      dc.numerator(0, 0), exact);
        report("dressed: sideband autocorrelation exactly zero vs finite exact value", ok, buf);
    }

    // --- Monte Carlo vs deterministic ---
    {
        DriveConfig drive;
        const double wS = mollow_splitting(drive.Omega);
        SensorConfig cfg{-wS, wS, 1.0, 0.1};
        const double det = g2_cross(drive, cfg);
        const LindbladModel model = build_sensor_model(drive, cfg, 2);
        TrajectoryOptions topts;
        topts.record_channels = {"sensor_1", "sensor_2"};
        std::vector<ClickStream> streams(8);
        detail::parallel_for(streams.size(), threads, [&](std::size_t s) {
            streams[s] = run_trajectory(model, 1e6, 1e-3, 1000 + s, topts);
        });
        const CoincidenceEstimate est = g2_estimate(streams, "sensor_1", "sensor_2", 0.25);
        const double sigmas = std::abs(est.value - det) / est.std_error;
        std::snprintf(buf, sizeof buf,
                      "MC %.3f +- %.3f vs deterministic %.3f (%.1f sigma, %ld pairs)",
                      est.value, est.std_error, det, std::min(sigmas, 999.0), est.n_pairs);
        report("montecarlo: coincidence counting matches deterministic g2 (3 sigma)",
               est.n_pairs >= 5 && sigmas < 3.0, buf);
    }

    return results;
}

} // namespace fcorr
