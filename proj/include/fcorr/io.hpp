#pragma once

// Serialization: CSV with 12-significant-digit formatting, JSON with a
// metadata envelope, and gnuplot script emission for the standard views.

#include <cstdio>
#include <ctime>
#include <fstream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "fcorr/montecarlo.hpp"
#include "fcorr/scan.hpp"

namespace fcorr::io {

inline constexpr const char* tool_version = "1.0.0";

inline std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// ISO-8601 UTC timestamp. Honors SOURCE_DATE_EPOCH so that serial runs
/// are bitwise reproducible from (config, seed).
inline std::string timestamp() {
    std::time_t t;
    if (const char* sde = std::getenv("SOURCE_DATE_EPOCH"))
        t = std::time_t(std::strtoll(sde, nullptr, 10));
    else
        t = std::time(nullptr);
    char buf[32];
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Metadata envelope shared by all JSON outputs. `parameters` must echo the
/// fully resolved run configuration, including defaulted epsilon.
inline nlohmann::json envelope(nlohmann::json parameters, std::uint64_t seed) {
    return {{"metadata",
             {{"parameters", std::move(parameters)},
              {"unit", "gamma_sigma"},
              {"tool_version", tool_version},
              {"timestamp", timestamp()},
              {"seed", seed}}}};
}

// ---- CSV ----

inline void write_landscape_csv(std::ostream& os, const LandscapeGrid& g) {
    os << "omega1,omega2,value,converged\n";
    for (int i = 0; i < g.axis.count; ++i)
        for (int j = 0; j < g.axis.count; ++j)
            os << fmt12(g.axis.at(i)) << ',' << fmt12(g.axis.at(j)) << ','
               << fmt12(g.values(i, j)) << ',' << (g.cell_converged(i, j) ? 1 : 0) << '\n';
}

inline void write_cut_csv(std::ostream& os, const LineCut& c) {
    os << "omega,value\n";
    for (std::size_t i = 0; i < c.omega.size(); ++i)
        os << fmt12(c.omega[i]) << ',' << fmt12(c.value[i]) << '\n';
}

inline void write_spectrum_csv(std::ostream& os,
                               const std::vector<std::pair<double, double>>& pts) {
    os << "omega,value\n";
    for (const auto& [w, v] : pts)
        os << fmt12(w) << ',' << fmt12(v) << '\n';
}

inline void write_gamma_scan_csv(std::ostream& os, const std::vector<GammaScanRow>& rows) {
    os << "omega,gamma,csi_R,bell_B,signal,converged\n";
    for (const auto& r : rows)
        os << fmt12(r.omega) << ',' << fmt12(r.Gamma) << ',' << fmt12(r.csi_R) << ','
           << fmt12(r.bell_B) << ',' << fmt12(r.signal) << ',' << (r.converged ? 1 : 0) << '\n';
}

// ---- JSON ----

inline nlohmann::json landscape_to_json(const LandscapeGrid& g) {
    nlohmann::json axis = nlohmann::json::array();
    for (int i = 0; i < g.axis.count; ++i)
        axis.push_back(g.axis.at(i));
    nlohmann::json values = nlohmann::json::array();
    nlohmann::json conv = nlohmann::json::array();
    for (int i = 0; i < g.axis.count; ++i) {
        nlohmann::json row = nlohmann::json::array(), crow = nlohmann::json::array();
        for (int j = 0; j < g.axis.count; ++j) {
            const double v = g.values(i, j);
            row.push_back(std::isnan(v) ? nlohmann::json() : nlohmann::json(v));
            crow.push_back(g.cell_converged(i, j));
        }
        values.push_back(std::move(row));
        conv.push_back(std::move(crow));
    }
    return {{"quantity", quantity_name(g.quantity)},
            {"omega_axis", std::move(axis)},
            {"values", std::move(values)},
            {"converged", std::move(conv)}};
}

inline Eigen::MatrixXd landscape_values_from_json(const nlohmann::json& data) {
    const auto& values = data.at("values");
    const int n = int(values.size());
    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto& v = values[i][j];
            out(i, j) = v.is_null() ? std::numeric_limits<double>::quiet_NaN()
                                    : v.get<double>();
        }
    return out;
}

inline nlohmann::json cut_to_json(const LineCut& c) {
    nlohmann::json out = {{"quantity", quantity_name(c.quantity)},
                          {"line", {{"alpha", c.line.alpha}, {"beta", c.line.beta}}},
                          {"omega", c.omega},
                          {"value", nlohmann::json::array()},
                          {"converged", nlohmann::json::array()}};
    for (std::size_t i = 0; i < c.value.size(); ++i) {
        out["value"].push_back(std::isnan(c.value[i]) ? nlohmann::json()
                                                      : nlohmann::json(c.value[i]));
        out["converged"].push_back(bool(c.converged[i]));
    }
    return out;
}

inline nlohmann::json gamma_scan_to_json(const std::vector<GammaScanRow>& rows) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : rows)
        out.push_back({{"omega", r.omega},
                       {"gamma", r.Gamma},
                       {"csi_R", r.csi_R},
                       {"bell_B", r.bell_B},
                       {"signal", r.signal},
                       {"converged", r.converged}});
    return out;
}

// ---- gnuplot scripts ----

inline void write_landscape_plot_script(std::ostream& os, const std::string& csv_path,
                                        const LandscapeGrid& g) {
    os << "# gnuplot script: frequency-correlation landscape\n"
       << "set datafile separator ','\n"
       << "set xlabel 'omega_1 / gamma_sigma'\n"
       << "set ylabel 'omega_2 / gamma_sigma'\n"
       << "set title '" << quantity_name(g.quantity) << ", Gamma = " << fmt12(g.Gamma)
       << " gamma_sigma'\n"
       << "set view map\n"
       << "set size square\n";
    if (g.quantity != Quantity::g2)
        os << "set cbrange [0:" << (g.quantity == Quantity::csi_R ? "2" : "2.83") << "]\n";
    os << "set logscale cb\n"
       << "splot '" << csv_path << "' skip 1 using 1:2:3 with points pt 5 ps 0.5 palette notitle\n";
}

inline void write_cut_plot_script(std::ostream& os, const std::string& csv_path,
                                  const LineCut& c) {
    os << "# gnuplot script: cut along omega2 = " << fmt12(c.line.alpha)
       << "*omega1 + " << fmt12(c.line.beta) << "\n"
       << "set datafile separator ','\n"
       << "set xlabel 'omega / gamma_sigma'\n"
       << "set ylabel '" << quantity_name(c.quantity) << "'\n"
       << "set logscale y\n"
       << "plot '" << csv_path << "' skip 1 using 1:2 with lines notitle\n";
}

inline void write_gamma_scan_plot_script(std::ostream& os, const std::string& csv_path) {
    os << "# gnuplot script: R, B and collectable signal vs filter linewidth\n"
       << "set datafile separator ','\n"
       << "set xlabel 'Gamma / gamma_sigma'\n"
       << "set logscale x\n"
       << "set logscale y\n"
       << "plot '" << csv_path << "' skip 1 using 2:3 with lines title 'R', \\\n"
       << "     '" << csv_path << "' skip 1 using 2:4 with lines title 'B', \\\n"
       << "     '" << csv_path << "' skip 1 using 2:5 with lines dt 2 title 'Gamma S'\n";
}

inline void write_spectrum_plot_script(std::ostream& os, const std::string& csv_path) {
    os << "# gnuplot script: filtered spectrum\n"
       << "set datafile separator ','\n"
       << "set xlabel 'omega / gamma_sigma'\n"
       << "set ylabel 'S_Gamma(omega)'\n"
       << "set logscale y\n"
       << "plot '" << csv_path << "' skip 1 using 1:2 with lines notitle\n";
}

inline void save_text(const std::string& path, const std::string& content) {
    std::ofstream f(path);
    if (!f)
        throw Error("cannot open output file: " + path);
    f << content;
    if (!f)
        throw Error("write failed: " + path);
}

} // namespace fcorr::io
