// fcorr command-line front end: spectra, correlations, inequality
// landscapes, Monte Carlo click streams, and the self-validation suite.
//
// Units: gamma_sigma = 1; all frequencies are offsets from the laser.
// Exit codes: 0 success, 1 internal error, 2 config/parse error,
// 3 success with numerical convergence flags (outputs still written).

#include <cstdlib>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fcorr/fcorr.hpp"

namespace {

using namespace fcorr;

struct GlobalConfig {
    double Omega = 10.0;
    double delta_sigma = 0.0;
    double pump_P = 0.0;
    double Gamma = 1.0;
    double epsilon = 0.0; // 0 -> default
    int n_max = 2;
    int threads = 1;

    DriveConfig drive() const { return {Omega, delta_sigma, pump_P}; }
};

int env_threads() {
    if (const char* v = std::getenv("FCORR_THREADS"))
        return std::max(1, std::atoi(v));
    return 1;
}

void add_global_flags(CLI::App& app, GlobalConfig& g) {
    app.add_option("--omega-drive", g.Omega, "Drive amplitude Omega (units gamma_sigma)");
    app.add_option("--delta-sigma", g.delta_sigma, "Emitter-laser detuning");
    app.add_option("--pump", g.pump_P, "Incoherent pump rate P");
    app.add_option("--gamma-filter", g.Gamma, "Filter linewidth Gamma");
    app.add_option("--epsilon", g.epsilon, "Sensor coupling (0 = default 1e-2*min(Gamma,1))");
    app.add_option("--n-max", g.n_max, "Sensor Fock truncation");
    app.add_option("--threads", g.threads, "Worker thread cap (1 = bitwise deterministic)");
}

nlohmann::json params_json(const GlobalConfig& g) {
    SensorConfig s{0, 0, g.Gamma, g.epsilon, g.n_max};
    return {{"omega_drive", g.Omega},     {"delta_sigma", g.delta_sigma},
            {"pump", g.pump_P},           {"gamma_filter", g.Gamma},
            {"epsilon", s.effective_epsilon()}, {"n_max", g.n_max},
            {"threads", g.threads}};
}

void save_json(const std::string& path, const nlohmann::json& j) {
    io::save_text(path, j.dump(2) + "\n");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fcorr: frequency-filtered correlations, Cauchy-Schwarz and "
                 "CHSH-Bell inequality landscapes of resonance fluorescence"};
    app.set_config("--config", "", "INI config file (flags override)");
    app.require_subcommand(1);

    GlobalConfig g;
    g.threads = env_threads();

    // common output options
    std::string out_csv, out_json, out_plot;

    // spectrum
    auto* sp = app.add_subcommand("spectrum", "Filtered spectrum S_Gamma(omega) on a grid");
    double sp_min = -60.0, sp_max = 60.0;
    int sp_points = 241;
    add_global_flags(*sp, g);
    sp->add_option("--omega-min", sp_min);
    sp->add_option("--omega-max", sp_max);
    sp->add_option("--points", sp_points);
    sp->add_option("--output", out_csv, "CSV output path");
    sp->add_option("--json", out_json, "JSON output path");
    sp->add_option("--plot", out_plot, "gnuplot script output path");

    // g2 / csi / bell (single point)
    auto* g2c = app.add_subcommand("g2", "Cross-correlation g2_Gamma(omega1, omega2)");
    auto* csic = app.add_subcommand("csi", "CSI ratio R_Gamma(omega1, omega2)");
    auto* bellc = app.add_subcommand("bell", "Bell parameter B_Gamma(omega1, omega2)");
    double w1 = 0.0, w2 = 0.0;
    std::vector<double> angles;
    bool bell_approx = false;
    for (auto* cmd : {g2c, csic, bellc}) {
        add_global_flags(*cmd, g);
        cmd->add_option("--omega1", w1)->required();
        cmd->add_option("--omega2", w2)->required();
        cmd->add_option("--json", out_json, "JSON output path");
    }
    bellc->add_option("--angles", angles,
                      "theta theta' phi phi' in radians (default: standard set)")
        ->expected(4);
    bellc->add_flag("--approx", bell_approx, "Drop the photon-transfer coherence terms");

    // landscape
    auto* land = app.add_subcommand("landscape", "Quantity over an (omega1, omega2) grid");
    std::string quantity_str = "g2";
    double l_min = -60.0, l_max = 60.0;
    int l_points = 121;
    bool no_symmetry = false, no_certify = false;
    add_global_flags(*land, g);
    land->add_option("--quantity", quantity_str, "g2 | csi | bell")
        ->check(CLI::IsMember({"g2", "csi", "bell"}));
    land->add_option("--omega-min", l_min);
    land->add_option("--omega-max", l_max);
    land->add_option("--points", l_points);
    land->add_flag("--no-symmetry", no_symmetry, "Compute every cell (skip swap symmetry)");
    land->add_flag("--no-certify", no_certify, "Skip the epsilon/2 certification per cell");
    land->add_option("--output", out_csv, "CSV output path");
    land->add_option("--json", out_json, "JSON output path");
    land->add_option("--plot", out_plot, "gnuplot script output path");

    // cut
    auto* cutc = app.add_subcommand("cut", "Quantity along a line omega2 = alpha*omega1 + beta");
    std::string line_str = "I";
    double cut_alpha = -1.0, cut_beta = 0.0;
    double c_min = -60.0, c_max = 60.0;
    int c_points = 241;
    add_global_flags(*cutc, g);
    cutc->add_option("--quantity", quantity_str, "g2 | csi | bell")
        ->check(CLI::IsMember({"g2", "csi", "bell"}));
    cutc->add_option("--line", line_str, "I (omega,-omega) | II (omega, omega_S-omega) | custom");
    cutc->add_option("--alpha", cut_alpha, "Line slope (with --line custom)");
    cutc->add_option("--beta", cut_beta, "Line offset (with --line custom)");
    cutc->add_option("--omega-min", c_min);
    cutc->add_option("--omega-max", c_max);
    cutc->add_option("--points", c_points);
    cutc->add_flag("--no-certify", no_certify);
    cutc->add_option("--output", out_csv, "CSV output path");
    cutc->add_option("--json", out_json, "JSON output path");
    cutc->add_option("--plot", out_plot, "gnuplot script output path");

    // gamma-scan
    auto* gsc = app.add_subcommand("gamma-scan",
                                   "R, B and signal at pairs (omega, -omega) vs linewidth");
    std::vector<double> gs_omegas, gs_gammas;
    double gs_gmin = 0.05, gs_gmax = 20.0;
    int gs_gpoints = 25;
    add_global_flags(*gsc, g);
    gsc->add_option("--omega", gs_omegas, "Pair frequencies omega_i (repeatable)");
    gsc->add_option("--gammas", gs_gammas, "Explicit Gamma list (overrides the log grid)");
    gsc->add_option("--gamma-min", gs_gmin);
    gsc->add_option("--gamma-max", gs_gmax);
    gsc->add_option("--gamma-points", gs_gpoints, "Log-spaced Gamma count");
    gsc->add_flag("--no-certify", no_certify);
    gsc->add_option("--output", out_csv, "CSV output path");
    gsc->add_option("--json", out_json, "JSON output path");
    gsc->add_option("--plot", out_plot, "gnuplot script output path");

    // trajectory
    auto* traj = app.add_subcommand("trajectory", "Quantum-jump click streams and g2 estimate");
    double t_duration = 1e5, t_dt = 0.0, t_bin = 0.0;
    std::uint64_t t_seed = 1;
    int t_nseeds = 4;
    bool t_record_all = false;
    add_global_flags(*traj, g);
    traj->add_option("--omega1", w1)->required();
    traj->add_option("--omega2", w2)->required();
    traj->add_option("--duration", t_duration, "Per-trajectory duration (units 1/gamma_sigma)");
    traj->add_option("--dt", t_dt, "Jump-time resolution (0 = 1e-3/max(Omega,Gamma,1))");
    traj->add_option("--seed", t_seed, "Base RNG seed");
    traj->add_option("--seeds", t_nseeds, "Number of independent trajectories");
    traj->add_option("--bin-width", t_bin, "Coincidence bin (0 = 0.05/Gamma)");
    traj->add_flag("--record-all", t_record_all, "Record emitter/pump clicks too");
    traj->add_option("--output", out_csv, "Click stream CSV path (seed index appended)");
    traj->add_option("--json", out_json, "JSON output path for the g2 estimate");

    // validate
    auto* val = app.add_subcommand("validate", "Run the self-validation suite");
    add_global_flags(*val, g);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e); // --help and friends
        app.exit(e);
        return 2;
    }

    bool convergence_flagged = false;
    try {
        const DriveConfig drive = g.drive();

        if (sp->parsed()) {
            std::vector<std::pair<double, double>> pts;
            std::vector<std::pair<double, double>> grid(sp_points);
            for (int i = 0; i < sp_points; ++i) {
                const double w = sp_points == 1
                                     ? sp_min
                                     : sp_min + (sp_max - sp_min) * double(i) / (sp_points - 1);
                grid[i] = {w, 0.0};
            }
            detail::parallel_for(grid.size(), g.threads, [&](std::size_t k) {
                grid[k].second = spectrum_point(drive, grid[k].first, g.Gamma, g.epsilon, g.n_max);
            });
            pts = grid;
            std::ostringstream csv;
            io::write_spectrum_csv(csv, pts);
            if (!out_csv.empty()) io::save_text(out_csv, csv.str());
            else std::cout << csv.str();
            if (!out_json.empty()) {
                nlohmann::json j = io::envelope(params_json(g), 0);
                j["data"] = {{"omega", nlohmann::json::array()}, {"value", nlohmann::json::array()}};
                for (const auto& [w, v] : pts) {
                    j["data"]["omega"].push_back(w);
                    j["data"]["value"].push_back(v);
                }
                save_json(out_json, j);
            }
            if (!out_plot.empty()) {
                std::ostringstream gp;
                io::write_spectrum_plot_script(gp, out_csv.empty() ? "spectrum.csv" : out_csv);
                io::save_text(out_plot, gp.str());
            }
        } else if (g2c->parsed() || csic->parsed() || bellc->parsed()) {
            SensorConfig cfg{w1, w2, g.Gamma, g.epsilon, g.n_max};
            const MomentTable t = filtered_moments(drive, cfg);
            convergence_flagged = !t.converged;
            nlohmann::json j = io::envelope(params_json(g), 0);
            j["metadata"]["parameters"]["omega1"] = w1;
            j["metadata"]["parameters"]["omega2"] = w2;
            if (g2c->parsed()) {
                if (t.n1 < 1e-30 || t.n2 < 1e-30)
                    throw UndefinedCorrelationError("g2: vanishing sensor population");
                const double v = t.moment(1, 1, 1, 1).real() / (t.n1 * t.n2);
                std::cout << "g2 = " << io::fmt12(v) << (t.converged ? "" : "  [NOT CONVERGED]")
                          << "\n";
                j["data"] = {{"g2", v}, {"converged", t.converged}};
            } else if (csic->parsed()) {
                const InequalityResult r = csi_ratio(t);
                std::cout << "R = " << io::fmt12(r.value) << "  (bound 1, "
                          << (r.violated ? "VIOLATED" : "not violated") << ")"
                          << (t.converged ? "" : "  [NOT CONVERGED]") << "\n";
                j["data"] = {{"R", r.value}, {"violated", r.violated}, {"converged", t.converged}};
            } else {
                InequalityResult r;
                if (bell_approx)
                    r = chsh_B_approx(t);
                else if (!angles.empty())
                    r = chsh_B_general(t, {angles[0], angles[1], angles[2], angles[3]});
                else
                    r = chsh_B_standard(t);
                std::cout << "B = " << io::fmt12(r.value) << "  (bound 2, "
                          << (r.violated ? "VIOLATED" : "not violated") << ")"
                          << (t.converged ? "" : "  [NOT CONVERGED]") << "\n";
                j["data"] = {{"B", r.value}, {"violated", r.violated}, {"converged", t.converged}};
            }
            if (!out_json.empty()) save_json(out_json, j);
        } else if (land->parsed()) {
            const Quantity q = quantity_str == "g2"    ? Quantity::g2
                               : quantity_str == "csi" ? Quantity::csi_R
                                                       : Quantity::bell_B;
            ScanOptions opts;
            opts.threads = g.threads;
            opts.exploit_symmetry = !no_symmetry;
            opts.certify = !no_certify;
            opts.epsilon = g.epsilon;
            opts.n_max = g.n_max;
            const LandscapeGrid grid = landscape(drive, q, {l_min, l_max, l_points}, g.Gamma, opts);
            convergence_flagged = !grid.all_converged();
            std::ostringstream csv;
            io::write_landscape_csv(csv, grid);
            if (!out_csv.empty()) io::save_text(out_csv, csv.str());
            else std::cout << csv.str();
            if (!out_json.empty()) {
                nlohmann::json j = io::envelope(params_json(g), 0);
                j["metadata"]["parameters"]["quantity"] = quantity_str;
                j["metadata"]["parameters"]["omega_min"] = l_min;
                j["metadata"]["parameters"]["omega_max"] = l_max;
                j["metadata"]["parameters"]["points"] = l_points;
                j["data"] = io::landscape_to_json(grid);
                save_json(out_json, j);
            }
            if (!out_plot.empty()) {
                std::ostringstream gp;
                io::write_landscape_plot_script(gp, out_csv.empty() ? "landscape.csv" : out_csv,
                                                grid);
                io::save_text(out_plot, gp.str());
            }
            if (grid.n_failed() > 0)
                std::cerr << "note: " << grid.n_failed() << " cells undefined (recorded as nan)\n";
        } else if (cutc->parsed()) {
            const Quantity q = quantity_str == "g2"    ? Quantity::g2
                               : quantity_str == "csi" ? Quantity::csi_R
                                                       : Quantity::bell_B;
            LineSpec line;
            if (line_str == "I")
                line = line_I();
            else if (line_str == "II")
                line = line_II(mollow_splitting(g.Omega));
            else if (line_str == "custom")
                line = {cut_alpha, cut_beta};
            else
                throw ValidationError("cut: --line must be I, II or custom");
            ScanOptions opts;
            opts.threads = g.threads;
            opts.certify = !no_certify;
            opts.epsilon = g.epsilon;
            opts.n_max = g.n_max;
            const LineCut c = cut(drive, q, line, c_min, c_max, c_points, g.Gamma, opts);
            for (auto f : c.converged) convergence_flagged |= !f;
            std::ostringstream csv;
            io::write_cut_csv(csv, c);
            if (!out_csv.empty()) io::save_text(out_csv, csv.str());
            else std::cout << csv.str();
            if (!out_json.empty()) {
                nlohmann::json j = io::envelope(params_json(g), 0);
                j["data"] = io::cut_to_json(c);
                save_json(out_json, j);
            }
            if (!out_plot.empty()) {
                std::ostringstream gp;
                io::write_cut_plot_script(gp, out_csv.empty() ? "cut.csv" : out_csv, c);
                io::save_text(out_plot, gp.str());
            }
        } else if (gsc->parsed()) {
            if (gs_omegas.empty())
                gs_omegas = {mollow_splitting(g.Omega), 1.125 * mollow_splitting(g.Omega),
                             1.25 * mollow_splitting(g.Omega)};
            if (gs_gammas.empty()) {
                for (int i = 0; i < gs_gpoints; ++i)
                    gs_gammas.push_back(gs_gmin * std::pow(gs_gmax / gs_gmin,
                                                           gs_gpoints == 1
                                                               ? 0.0
                                                               : double(i) / (gs_gpoints - 1)));
            }
            ScanOptions opts;
            opts.threads = g.threads;
            opts.certify = !no_certify;
            opts.epsilon = g.epsilon;
            opts.n_max = g.n_max;
            const auto rows = gamma_scan(drive, gs_omegas, gs_gammas, opts);
            for (const auto& r : rows) convergence_flagged |= !r.converged;
            std::ostringstream csv;
            io::write_gamma_scan_csv(csv, rows);
            if (!out_csv.empty()) io::save_text(out_csv, csv.str());
            else std::cout << csv.str();
            if (!out_json.empty()) {
                nlohmann::json j = io::envelope(params_json(g), 0);
                j["data"] = io::gamma_scan_to_json(rows);
                save_json(out_json, j);
            }
            if (!out_plot.empty()) {
                std::ostringstream gp;
                io::write_gamma_scan_plot_script(gp, out_csv.empty() ? "gamma_scan.csv" : out_csv);
                io::save_text(out_plot, gp.str());
            }
        } else if (traj->parsed()) {
            SensorConfig cfg{w1, w2, g.Gamma, g.epsilon, g.n_max};
            const LindbladModel model = build_sensor_model(drive, cfg, 2);
            if (t_dt <= 0.0)
                t_dt = 1e-3 / std::max({drive.Omega, g.Gamma, 1.0});
            if (t_bin <= 0.0)
                t_bin = 0.05 / g.Gamma;
            TrajectoryOptions opts;
            if (!t_record_all)
                opts.record_channels = {"sensor_1", "sensor_2"};
            std::vector<ClickStream> streams;
            for (int s = 0; s < t_nseeds; ++s)
                streams.push_back(run_trajectory(model, t_duration, t_dt, t_seed + s, opts));
            if (!out_csv.empty()) {
                for (int s = 0; s < t_nseeds; ++s) {
                    std::ostringstream csv;
                    write_clickstream_csv(csv, streams[s]);
                    io::save_text(out_csv + "." + std::to_string(s), csv.str());
                }
            }
            const CoincidenceEstimate est = g2_estimate(streams, "sensor_1", "sensor_2", t_bin);
            std::cout << "g2 estimate = " << io::fmt12(est.value) << " +- "
                      << io::fmt12(est.std_error) << "  (pairs " << est.n_pairs << ", bin "
                      << io::fmt12(est.bin_width) << ")"
                      << (est.sufficient ? "" : "  [INSUFFICIENT STATISTICS]") << "\n";
            convergence_flagged = !est.sufficient;
            if (!out_json.empty()) {
                nlohmann::json j = io::envelope(params_json(g), t_seed);
                j["metadata"]["parameters"]["omega1"] = w1;
                j["metadata"]["parameters"]["omega2"] = w2;
                j["metadata"]["parameters"]["duration"] = t_duration;
                j["metadata"]["parameters"]["dt"] = t_dt;
                j["metadata"]["parameters"]["seeds"] = t_nseeds;
                j["data"] = {{"g2", est.value},
                             {"std_error", est.std_error},
                             {"n_pairs", est.n_pairs},
                             {"bin_width", est.bin_width},
                             {"sufficient", est.sufficient}};
                save_json(out_json, j);
            }
        } else if (val->parsed()) {
            const auto results = run_validation(g.threads);
            int failed = 0;
            for (const auto& r : results) {
                std::cout << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  [" << r.detail
                          << "]\n";
                failed += r.pass ? 0 : 1;
            }
            std::cout << (failed == 0 ? "all checks passed" : std::to_string(failed) + " check(s) FAILED")
                      << "\n";
            return failed == 0 ? 0 : 1;
        }
    } catch (const ValidationError& e) {
        std::cerr << "{\"error\": \"config\", \"message\": \"" << e.what() << "\"}\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "{\"error\": \"internal\", \"message\": \"" << e.what() << "\"}\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "{\"error\": \"internal\", \"message\": \"" << e.what() << "\"}\n";
        return 1;
    }
    return convergence_flagged ? 3 : 0;
}
