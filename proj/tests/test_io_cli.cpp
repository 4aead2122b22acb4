#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "fcorr/io.hpp"
#include "fcorr/scan.hpp"

using namespace fcorr;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path);
    REQUIRE(f.good());
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(FCORR_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

LandscapeGrid tiny_grid() {
    ScanOptions opts;
    opts.certify = false;
    return landscape({10.0, 0.0, 0.0}, Quantity::g2, {-20.0, 20.0, 3}, 1.0, opts);
}

} // namespace

TEST_CASE("12-significant-digit formatting", "[io_cli]") {
    CHECK(io::fmt12(1.0) == "1");
    CHECK(io::fmt12(1.0 / 3.0) == "0.333333333333");
    CHECK(io::fmt12(1.23456789012e-7) == "1.23456789012e-07");
}

TEST_CASE("timestamp honors SOURCE_DATE_EPOCH", "[io_cli]") {
    setenv("SOURCE_DATE_EPOCH", "0", 1);
    CHECK(io::timestamp() == "1970-01-01T00:00:00Z");
    unsetenv("SOURCE_DATE_EPOCH");
}

TEST_CASE("metadata envelope", "[io_cli]") {
    const nlohmann::json j = io::envelope({{"Gamma", 1.0}}, 42);
    CHECK(j.at("metadata").at("unit") == "gamma_sigma");
    CHECK(j.at("metadata").at("tool_version") == io::tool_version);
    CHECK(j.at("metadata").at("seed") == 42);
    CHECK(j.at("metadata").at("parameters").at("Gamma") == 1.0);
    CHECK(j.at("metadata").contains("timestamp"));
}

TEST_CASE("landscape CSV layout", "[io_cli]") {
    const LandscapeGrid g = tiny_grid();
    std::ostringstream os;
    io::write_landscape_csv(os, g);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "omega1,omega2,value,converged");
    int rows = 0;
    while (std::getline(is, line))
        ++rows;
    CHECK(rows == 9);
}

TEST_CASE("landscape JSON round trip is bitwise", "[io_cli]") {
    const LandscapeGrid g = tiny_grid();
    const nlohmann::json j = io::landscape_to_json(g);
    const nlohmann::json reparsed = nlohmann::json::parse(j.dump());
    const Eigen::MatrixXd back = io::landscape_values_from_json(reparsed);
    for (int i = 0; i < 3; ++i)
        for (int j2 = 0; j2 < 3; ++j2) {
            if (std::isnan(g.values(i, j2)))
                CHECK(std::isnan(back(i, j2)));
            else
                CHECK(back(i, j2) == g.values(i, j2));
        }
    CHECK(j.at("quantity") == "g2");
}

TEST_CASE("gamma-scan CSV layout", "[io_cli]") {
    std::vector<GammaScanRow> rows(1);
    rows[0] = {20.0, 0.5, 2.0, 1.5, 0.25, true};
    std::ostringstream os;
    io::write_gamma_scan_csv(os, rows);
    CHECK(os.str() == "omega,gamma,csi_R,bell_B,signal,converged\n20,0.5,2,1.5,0.25,1\n");
}

TEST_CASE("cli: point quantities and exit codes", "[io_cli]") {
    const std::string tmp = "/tmp/fcorr_test_point.json";
    CHECK(run_cli("g2 --omega1 0 --omega2 19.998437 --json " + tmp) == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(tmp));
    CHECK(j.at("data").at("g2").get<double>() == Catch::Approx(0.2298).epsilon(2e-3));
    CHECK(j.at("data").at("converged").get<bool>());
    CHECK(j.at("metadata").at("parameters").at("epsilon").get<double>() == 0.01);

    CHECK(run_cli("") == 2);                       // missing subcommand
    CHECK(run_cli("g2 --omega1 0") == 2);          // missing required flag
    CHECK(run_cli("g2 --omega1 0 --omega2 0 --gamma-filter -1") == 2); // invalid config
    CHECK(run_cli("--help") == 0);
}

TEST_CASE("cli: landscape CSV and JSON outputs", "[io_cli]") {
    const std::string csv = "/tmp/fcorr_test_land.csv";
    const std::string json = "/tmp/fcorr_test_land.json";
    CHECK(run_cli("landscape --quantity csi --omega-min -21 --omega-max 21 --points 3 "
                  "--no-certify --output " + csv + " --json " + json) == 0);
    std::istringstream is(slurp(csv));
    std::string line;
    std::getline(is, line);
    CHECK(line == "omega1,omega2,value,converged");
    int rows = 0;
    while (std::getline(is, line))
        ++rows;
    CHECK(rows == 9);
    const nlohmann::json j = nlohmann::json::parse(slurp(json));
    CHECK(j.at("data").at("omega_axis").size() == 3);
    CHECK(j.at("metadata").at("parameters").at("quantity") == "csi");
}

TEST_CASE("cli: trajectory determinism in the seed", "[io_cli]") {
    const std::string a = "/tmp/fcorr_test_traj_a.json";
    const std::string b = "/tmp/fcorr_test_traj_b.json";
    const std::string args =
        "trajectory --omega1 -19.998437 --omega2 19.998437 --epsilon 0.1 "
        "--duration 3000 --seeds 2 --seed 9 --json ";
    CHECK(run_cli(args + a) == 3); // insufficient statistics by design
    CHECK(run_cli(args + b) == 3);
    nlohmann::json ja = nlohmann::json::parse(slurp(a));
    nlohmann::json jb = nlohmann::json::parse(slurp(b));
    ja["metadata"].erase("timestamp");
    jb["metadata"].erase("timestamp");
    CHECK(ja == jb);
}
