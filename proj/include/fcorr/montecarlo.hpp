#pragma once

// Quantum-jump (Monte Carlo wave-function) unraveling of a LindbladModel.
// Jump records are photodetection clicks, labeled by collapse channel; the
// coincidence counter below turns them into g2 estimates, which serve as a
// statistical oracle for the deterministic sensor results.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "fcorr/lindblad.hpp"

namespace fcorr {

struct ClickEvent {
    double time;
    int channel; // index into ClickStream::labels
};

struct ClickStream {
    std::vector<ClickEvent> events; // strictly increasing times
    std::vector<std::string> labels;
    double duration = 0.0;
    std::uint64_t seed = 0;
    std::string model_fingerprint;
};

struct CoincidenceEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long n_pairs = 0;
    double bin_width = 0.0;
    bool sufficient = true; // false when click counts are too low for meaningful errors
};

namespace detail {

/// 53-bit uniform in [0, 1), independent of the standard library's
/// distribution implementations so streams are reproducible everywhere.
inline double uniform01(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

inline std::string fingerprint(const LindbladModel& model) {
    std::ostringstream os;
    os.precision(17);
    for (int d : model.space.dims) os << d << ',';
    os << ';';
    for (const auto& c : model.collapse) os << c.label << ':' << c.rate << ',';
    os << ';' << model.H.cwiseAbs().sum() << ';' << model.H.diagonal().real().sum();
    return std::to_string(std::hash<std::string>{}(os.str()));
}

} // namespace detail

struct TrajectoryOptions {
    /// Initial state; defaults to the first basis vector (emitter ground,
    /// sensors in vacuum).
    std::optional<Vector> initial_state;
    /// Channels to record; empty means all. Unrecorded channels still jump.
    std::set<std::string> record_channels;
};

/// Norm-threshold jump unraveling. The no-jump evolution uses exact
/// one-step propagators exp(-i H_eff dt 2^k) on a dyadic ladder: coarse
/// steps between jumps, bisection down to resolution dt when the squared
/// norm crosses the drawn threshold. Valid because the no-jump norm is
/// monotone decreasing. Deterministic given (model, duration, dt, seed).
inline ClickStream run_trajectory(const LindbladModel& model, double duration,
                                  double dt, std::uint64_t seed,
                                  const TrajectoryOptions& opts = {}) {
    model.validate();
    if (!(dt > 0.0) || !(duration > 0.0))
        throw ValidationError("run_trajectory: duration and dt must be > 0");
    const int d = model.space.total();
    const int nchan = int(model.collapse.size());

    Matrix h_eff = model.H;
    for (const auto& c : model.collapse)
        h_eff -= Complex(0, 0.5) * c.rate * (c.op.adjoint() * c.op);

    // Dyadic propagator ladder; coarse step capped near 0.2 time units.
    int levels = 1;
    while (levels < 20 && dt * double(1 << levels) < 0.2 && dt * double(1 << levels) < duration / 4.0)
        ++levels;
    std::vector<Matrix> U(levels + 1);
    U[0] = (Complex(0, -1) * dt * h_eff).exp();
    for (int k = 1; k <= levels; ++k)
        U[k] = U[k - 1] * U[k - 1];

    std::vector<int> recorded(nchan, 1);
    if (!opts.record_channels.empty())
        for (int c = 0; c < nchan; ++c)
            recorded[c] = opts.record_channels.count(model.collapse[c].label) ? 1 : 0;

    std::mt19937_64 rng(seed);
    Vector psi;
    if (opts.initial_state) {
        psi = *opts.initial_state;
        if (psi.size() != d)
            throw DimensionError("run_trajectory: initial state dimension mismatch");
        psi.normalize();
    } else {
        psi = Vector::Zero(d);
        psi(0) = 1.0;
    }

    ClickStream stream;
    for (const auto& c : model.collapse)
        stream.labels.push_back(c.label);
    stream.duration = duration;
    stream.seed = seed;
    stream.model_fingerprint = detail::fingerprint(model);

    double t = 0.0;
    double threshold = detail::uniform01(rng);
    Vector trial(d), collapsed(d);
    std::vector<double> weights(nchan);

    auto do_jump = [&]() {
        double total = 0.0;
        for (int c = 0; c < nchan; ++c) {
            collapsed.noalias() = model.collapse[c].op * psi;
            weights[c] = model.collapse[c].rate * collapsed.squaredNorm();
            total += weights[c];
        }
        if (!(total > 0.0))
            throw StepSizeError("run_trajectory: zero jump weight at threshold crossing");
        double u = detail::uniform01(rng) * total;
        int chosen = nchan - 1;
        for (int c = 0; c < nchan; ++c) {
            u -= weights[c];
            if (u <= 0.0) { chosen = c; break; }
        }
        psi = (model.collapse[chosen].op * psi).normalized();
        if (recorded[chosen])
            stream.events.push_back({t, chosen});
        threshold = detail::uniform01(rng);
    };

    // Advance by dt*2^k, bisecting when the norm crosses the threshold.
    // Returns true if a jump happened inside the interval.
    std::function<bool(int)> advance = [&](int k) -> bool {
        trial.noalias() = U[k] * psi;
        const double n2 = trial.squaredNorm();
        if (n2 > threshold) {
            psi.swap(trial);
            t += dt * double(1 << k);
            return false;
        }
        if (k == 0) {
            if (n2 < 0.1 * psi.squaredNorm())
                throw StepSizeError("run_trajectory: dt too large to resolve jump time");
            psi.swap(trial);
            t += dt;
            do_jump();
            return true;
        }
        if (advance(k - 1))
            return true;
        return advance(k - 1);
    };

    while (t < duration) {
        int k = levels;
        while (k > 0 && t + dt * double(1 << k) > duration)
            --k;
        if (t + dt * double(1 << k) > duration)
            break;
        advance(k);
    }
    return stream;
}

/// Zero-delay coincidence-counting estimate of g2 between two channels:
/// ordered pairs with t_b - t_a in [0, bin_width), normalized by
/// rate_a * rate_b * bin_width * duration, batched per trajectory.
inline CoincidenceEstimate g2_estimate(const std::vector<ClickStream>& streams,
                                       const std::string& channel_a,
                                       const std::string& channel_b,
                                       double bin_width) {
    if (!(bin_width > 0.0))
        throw ValidationError("g2_estimate: bin_width must be > 0");
    if (streams.empty())
        throw ValidationError("g2_estimate: no streams");

    std::vector<double> batch;
    long total_pairs = 0;
    long min_clicks = std::numeric_limits<long>::max();

    for (const auto& s : streams) {
        int ia = -1, ib = -1;
        for (int c = 0; c < int(s.labels.size()); ++c) {
            if (s.labels[c] == channel_a) ia = c;
            if (s.labels[c] == channel_b) ib = c;
        }
        if (ia < 0 || ib < 0)
            throw ValidationError("g2_estimate: channel label not present in stream");

        std::vector<double> ta, tb;
        for (const auto& e : s.events) {
            if (e.channel == ia) ta.push_back(e.time);
            if (e.channel == ib) tb.push_back(e.time);
        }
        min_clicks = std::min({min_clicks, long(ta.size()), long(tb.size())});

        long pairs = 0;
        std::size_t lo = 0;
        const bool same = (ia == ib);
        for (std::size_t i = 0; i < ta.size(); ++i) {
            while (lo < tb.size() && tb[lo] < ta[i]) ++lo;
            for (std::size_t j = lo; j < tb.size() && tb[j] - ta[i] < bin_width; ++j)
                if (!same || tb[j] != ta[i])
                    ++pairs;
        }
        total_pairs += pairs;

        const double ra = double(ta.size()) / s.duration;
        const double rb = double(tb.size()) / s.duration;
        const double norm = ra * rb * bin_width * s.duration;
        batch.push_back(norm > 0.0 ? double(pairs) / norm : 0.0);
    }

    CoincidenceEstimate est;
    est.bin_width = bin_width;
    est.n_pairs = total_pairs;
    double mean = 0.0;
    for (double v : batch) mean += v;
    mean /= double(batch.size());
    est.value = mean;
    if (batch.size() > 1) {
        double var = 0.0;
        for (double v : batch) var += (v - mean) * (v - mean);
        var /= double(batch.size() - 1);
        est.std_error = std::sqrt(var / double(batch.size()));
    } else {
        est.std_error = total_pairs > 0 ? mean / std::sqrt(double(total_pairs)) : 1.0;
    }
    est.std_error = std::max(est.std_error, 1e-300);
    est.sufficient = min_clicks >= 1000 && total_pairs > 1;
    return est;
}

/// Export: CSV with header `time,channel`, times in units of 1/gamma_sigma.
inline void write_clickstream_csv(std::ostream& os, const ClickStream& s) {
    os << "time,channel\n";
    char buf[64];
    for (const auto& e : s.events) {
        std::snprintf(buf, sizeof buf, "%.12g", e.time);
        os << buf << ',' << s.labels[e.channel] << '\n';
    }
}

} // namespace fcorr
