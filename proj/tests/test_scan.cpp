#include <catch2/catch_amalgamated.hpp>

#include "fcorr/scan.hpp"

using namespace fcorr;

namespace {
const DriveConfig kDrive{10.0, 0.0, 0.0};
}

TEST_CASE("grid spec", "[scan]") {
    const GridSpec g{-2.0, 2.0, 5};
    CHECK(g.at(0) == -2.0);
    CHECK(g.at(2) == 0.0);
    CHECK(g.at(4) == 2.0);
    CHECK(GridSpec{1.5, 1.5, 1}.at(0) == 1.5);
    CHECK_THROWS_AS((GridSpec{0, 1, 0}.validate()), ValidationError);
    CHECK_THROWS_AS((GridSpec{0, 1, 513}.validate()), ValidationError);
    CHECK_THROWS_AS((GridSpec{1, 0, 5}.validate()), ValidationError);
}

TEST_CASE("landscape symmetry shortcut matches the full computation", "[scan]") {
    ScanOptions fast, full;
    fast.certify = full.certify = false;
    full.exploit_symmetry = false;
    const GridSpec grid{-22.0, 22.0, 5};
    const LandscapeGrid a = landscape(kDrive, Quantity::g2, grid, 1.0, fast);
    const LandscapeGrid b = landscape(kDrive, Quantity::g2, grid, 1.0, full);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            INFO("cell " << i << "," << j);
            CHECK(a.values(i, j) == Catch::Approx(b.values(i, j)).epsilon(1e-6));
            // and the full grid is swap-symmetric on its own
            CHECK(b.values(i, j) == Catch::Approx(b.values(j, i)).epsilon(1e-6));
        }
    CHECK(a.n_failed() == 0);
    CHECK(a.all_converged());
}

TEST_CASE("undefined cells degrade to NaN without aborting the scan", "[scan]") {
    // No drive and no pump: the emitter never emits, so every correlation
    // is undefined but the scan itself must complete.
    DriveConfig dark;
    dark.Omega = 0.0;
    ScanOptions opts;
    opts.certify = false;
    const LandscapeGrid g = landscape(dark, Quantity::g2, {-1.0, 1.0, 3}, 1.0, opts);
    CHECK(g.n_failed() == 9);
    CHECK(g.all_converged()); // undefined, not unconverged
}

TEST_CASE("threaded scans reproduce the serial result", "[scan]") {
    ScanOptions serial, threaded;
    serial.certify = threaded.certify = false;
    threaded.threads = 3;
    const GridSpec grid{-21.0, 21.0, 4};
    const LandscapeGrid a = landscape(kDrive, Quantity::csi_R, grid, 1.0, serial);
    const LandscapeGrid b = landscape(kDrive, Quantity::csi_R, grid, 1.0, threaded);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(a.values(i, j) == b.values(i, j)); // bitwise: same cells, same math
}

TEST_CASE("line cuts follow the specified line", "[scan]") {
    CHECK(line_I().alpha == -1.0);
    CHECK(line_I().beta == 0.0);
    CHECK(line_II(20.0).beta == 20.0);

    ScanOptions opts;
    opts.certify = false;
    const LineCut c = cut(kDrive, Quantity::g2, line_I(), 21.0, 25.0, 3, 1.0, opts);
    REQUIRE(c.omega.size() == 3);
    CHECK(c.omega[1] == 23.0);
    // line I point equals the direct cross-correlation at (w, -w)
    const double direct = g2_cross(kDrive, {23.0, -23.0, 1.0, 0.0});
    CHECK(c.value[1] == Catch::Approx(direct).epsilon(1e-9));
    CHECK_THROWS_AS(cut(kDrive, Quantity::g2, line_I(), 0, 1, 0, 1.0, opts), ValidationError);
}

TEST_CASE("gamma scan rows and epsilon clamping", "[scan]") {
    ScanOptions opts;
    opts.certify = false;
    const std::vector<double> omegas{20.0, 25.0};
    const std::vector<double> gammas{0.5, 2.0};
    const auto rows = gamma_scan(kDrive, omegas, gammas, opts);
    REQUIRE(rows.size() == 4);
    CHECK(rows[0].omega == 20.0);
    CHECK(rows[0].Gamma == 0.5);
    CHECK(rows[3].omega == 25.0);
    CHECK(rows[3].Gamma == 2.0);
    for (const auto& r : rows) {
        CHECK(r.signal > 0.0);
        CHECK(std::isfinite(r.csi_R));
        CHECK(std::isfinite(r.bell_B));
    }
    // small Gamma with an explicit epsilon gets clamped instead of throwing
    ScanOptions tight = opts;
    tight.epsilon = 0.05;
    CHECK_NOTHROW(gamma_scan(kDrive, {20.0}, {0.1}, tight));
    CHECK_THROWS_AS(gamma_scan(kDrive, {20.0}, {-1.0}, opts), ValidationError);
}

TEST_CASE("quantity names", "[scan]") {
    CHECK(std::string(quantity_name(Quantity::g2)) == "g2");
    CHECK(std::string(quantity_name(Quantity::csi_R)) == "csi_R");
    CHECK(std::string(quantity_name(Quantity::bell_B)) == "bell_B");
}
