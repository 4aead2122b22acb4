#pragma once

// Grid, line, and linewidth scans over the sensors + inequalities pipeline.
// Each cell is one steady-state solve; cells are independent, so scans are
// a plain parallel map with slot-indexed writes.

#include <atomic>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "fcorr/inequalities.hpp"
#include "fcorr/sensors.hpp"

namespace fcorr {

enum class Quantity { g2, csi_R, bell_B };

inline const char* quantity_name(Quantity q) {
    switch (q) {
        case Quantity::g2: return "g2";
        case Quantity::csi_R: return "csi_R";
        case Quantity::bell_B: return "bell_B";
    }
    return "?";
}

struct GridSpec {
    double omega_min = 0.0;
    double omega_max = 0.0;
    int count = 0;

    double at(int i) const {
        return count == 1 ? omega_min
                          : omega_min + (omega_max - omega_min) * double(i) / double(count - 1);
    }
    void validate() const {
        if (count < 1 || count > 512)
            throw ValidationError("GridSpec: count must be in [1, 512]");
        if (!(omega_max >= omega_min))
            throw ValidationError("GridSpec: omega_max < omega_min");
    }
};

struct ScanOptions {
    int threads = 1;
    bool exploit_symmetry = true; // compute i <= j and mirror (all quantities are swap-symmetric)
    bool certify = true;          // epsilon/2 recomputation per cell
    double epsilon = 0.0;         // 0 -> default_epsilon(Gamma)
    int n_max = 2;
};

struct LandscapeGrid {
    Quantity quantity = Quantity::g2;
    GridSpec axis;
    double Gamma = 1.0;
    DriveConfig drive;
    Eigen::MatrixXd values;              // NaN marks a failed cell
    std::vector<std::uint8_t> converged; // row-major count x count

    bool cell_converged(int i, int j) const { return converged[std::size_t(i) * axis.count + j] != 0; }
    int n_failed() const {
        int n = 0;
        for (int i = 0; i < values.rows(); ++i)
            for (int j = 0; j < values.cols(); ++j)
                if (std::isnan(values(i, j))) ++n;
        return n;
    }
    bool all_converged() const {
        for (auto f : converged)
            if (!f) return false;
        return true;
    }
};

namespace detail {

inline double quantity_from_table(Quantity q, const MomentTable& t) {
    switch (q) {
        case Quantity::g2:
            if (t.n1 < 1e-30 || t.n2 < 1e-30)
                throw UndefinedCorrelationError("g2: vanishing population");
            return t.moment(1, 1, 1, 1).real() / (t.n1 * t.n2);
        case Quantity::csi_R:
            return csi_ratio(t).value;
        case Quantity::bell_B:
            return chsh_B_standard(t).value;
    }
    throw ValidationError("unknown quantity");
}

/// One cell: moments at (w1, w2), then the requested scalar. Failures
/// (undefined ratios, degenerate solves) degrade to NaN, never abort.
inline double evaluate_cell(const DriveConfig& drive, Quantity q, double w1, double w2,
                            double Gamma, const ScanOptions& opts, bool& converged) {
    SensorConfig cfg{w1, w2, Gamma, opts.epsilon, opts.n_max};
    try {
        const MomentTable t = filtered_moments(drive, cfg, opts.certify);
        converged = t.converged;
        return quantity_from_table(q, t);
    } catch (const UndefinedCorrelationError&) {
        converged = true;
        return std::numeric_limits<double>::quiet_NaN();
    } catch (const DegenerateSteadyStateError&) {
        converged = false;
        return std::numeric_limits<double>::quiet_NaN();
    }
}

template <typename Fn>
inline void parallel_for(std::size_t n_tasks, int threads, Fn&& body) {
    if (threads <= 1) {
        for (std::size_t k = 0; k < n_tasks; ++k) body(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int n = std::min<int>(threads, int(n_tasks));
    pool.reserve(n);
    for (int w = 0; w < n; ++w)
        pool.emplace_back([&] {
            for (std::size_t k = next.fetch_add(1); k < n_tasks; k = next.fetch_add(1))
                body(k);
        });
    for (auto& th : pool) th.join();
}

} // namespace detail

inline LandscapeGrid landscape(const DriveConfig& drive, Quantity quantity,
                               const GridSpec& grid, double Gamma,
                               const ScanOptions& opts = {}) {
    drive.validate();
    grid.validate();
    const int n = grid.count;

    LandscapeGrid out;
    out.quantity = quantity;
    out.axis = grid;
    out.Gamma = Gamma;
    out.drive = drive;
    out.values = Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
    out.converged.assign(std::size_t(n) * n, 1);

    std::vector<std::pair<int, int>> cells;
    for (int i = 0; i < n; ++i)
        for (int j = opts.exploit_symmetry ? i : 0; j < n; ++j)
            cells.emplace_back(i, j);

    detail::parallel_for(cells.size(), opts.threads, [&](std::size_t k) {
        const auto [i, j] = cells[k];
        bool conv = true;
        const double v =
            detail::evaluate_cell(drive, quantity, grid.at(i), grid.at(j), Gamma, opts, conv);
        out.values(i, j) = v;
        out.converged[std::size_t(i) * n + j] = conv ? 1 : 0;
        if (opts.exploit_symmetry && i != j) {
            out.values(j, i) = v;
            out.converged[std::size_t(j) * n + i] = conv ? 1 : 0;
        }
    });
    return out;
}

/// Affine line omega2 = alpha * omega1 + beta in the frequency plane.
struct LineSpec {
    double alpha = -1.0;
    double beta = 0.0;
};

inline LineSpec line_I() { return {-1.0, 0.0}; }                       // (w, -w)
inline LineSpec line_II(double omega_S) { return {-1.0, omega_S}; }    // (w, w_S - w)

struct LineCut {
    LineSpec line;
    Quantity quantity = Quantity::g2;
    std::vector<double> omega;
    std::vector<double> value;
    std::vector<std::uint8_t> converged;
};

inline LineCut cut(const DriveConfig& drive, Quantity quantity, const LineSpec& line,
                   double omega_min, double omega_max, int count, double Gamma,
                   const ScanOptions& opts = {}) {
    drive.validate();
    if (count < 1 || count > 4096)
        throw ValidationError("cut: count must be in [1, 4096]");

    LineCut out;
    out.line = line;
    out.quantity = quantity;
    out.omega.resize(count);
    out.value.assign(count, std::numeric_limits<double>::quiet_NaN());
    out.converged.assign(count, 1);
    for (int i = 0; i < count; ++i)
        out.omega[i] = count == 1 ? omega_min
                                  : omega_min + (omega_max - omega_min) * double(i) / double(count - 1);

    detail::parallel_for(std::size_t(count), opts.threads, [&](std::size_t k) {
        const double w1 = out.omega[k];
        const double w2 = line.alpha * w1 + line.beta;
        bool conv = true;
        out.value[k] = detail::evaluate_cell(drive, quantity, w1, w2, Gamma, opts, conv);
        out.converged[k] = conv ? 1 : 0;
    });
    return out;
}

struct GammaScanRow {
    double omega = 0.0; // the pair is (omega, -omega)
    double Gamma = 0.0;
    double csi_R = 0.0;
    double bell_B = 0.0;
    double signal = 0.0; // Gamma * S_Gamma(omega)
    bool converged = true;
};

inline std::vector<GammaScanRow> gamma_scan(const DriveConfig& drive,
                                            const std::vector<double>& omegas,
                                            const std::vector<double>& gammas,
                                            const ScanOptions& opts = {}) {
    drive.validate();
    for (double g : gammas)
        if (!(g > 0.0))
            throw ValidationError("gamma_scan: Gamma values must be > 0");

    std::vector<GammaScanRow> rows(omegas.size() * gammas.size());
    detail::parallel_for(rows.size(), opts.threads, [&](std::size_t k) {
        const double w = omegas[k / gammas.size()];
        const double G = gammas[k % gammas.size()];
        GammaScanRow row;
        row.omega = w;
        row.Gamma = G;
        SensorConfig cfg{w, -w, G, opts.epsilon > 0.0 ? std::min(opts.epsilon, 0.1 * std::min(G, 1.0)) : 0.0,
                         opts.n_max};
        try {
            const MomentTable t = filtered_moments(drive, cfg, opts.certify);
            row.converged = t.converged;
            row.csi_R = csi_ratio(t).value;
            row.bell_B = chsh_B_standard(t).value;
        } catch (const UndefinedCorrelationError&) {
            row.csi_R = row.bell_B = std::numeric_limits<double>::quiet_NaN();
        } catch (const DegenerateSteadyStateError&) {
            row.converged = false;
            row.csi_R = row.bell_B = std::numeric_limits<double>::quiet_NaN();
        }
        row.signal = G * spectrum_point(drive, w, G, cfg.epsilon, opts.n_max);
        rows[k] = row;
    });
    return rows;
}

} // namespace fcorr
