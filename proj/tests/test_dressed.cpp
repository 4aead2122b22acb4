#include <catch2/catch_amalgamated.hpp>

#include "fcorr/dressed.hpp"

using namespace fcorr;

TEST_CASE("resonant dressed amplitudes", "[dressed]") {
    const DressedBasis b = dressed_amplitudes({10.0, 0.0, 0.0});
    CHECK(b.c == Catch::Approx(1.0 / std::sqrt(2.0)));
    CHECK(b.s == Catch::Approx(1.0 / std::sqrt(2.0)));
    CHECK(b.c * b.c + b.s * b.s == Catch::Approx(1.0));
    // |+> and |-> are orthonormal
    CHECK(std::abs(b.plus().adjoint()(0, 0) * b.plus()(0, 0) +
                   b.plus().adjoint()(0, 1) * b.plus()(1, 0) - Complex(1, 0)) < 1e-14);
    CHECK(std::abs((b.plus().adjoint() * b.minus())(0, 0)) < 1e-14);
}

TEST_CASE("dressing requires a resonant drive", "[dressed]") {
    CHECK_THROWS_AS(dressed_amplitudes({0.0, 0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(dressed_amplitudes({10.0, 2.0, 0.0}), ValidationError);
}

TEST_CASE("dressed modes decompose sigma_minus", "[dressed]") {
    const DressedBasis b = dressed_amplitudes({10.0, 0.0, 0.0});
    const auto modes = dressed_modes(b);
    Matrix sum = Matrix::Zero(2, 2);
    for (const auto& m : modes)
        sum += m;
    // s1 + s2 + s3 = c^2 |-><+| + cs(|+><+| - |-><-|) - s^2 |+><-| should
    // reproduce sigma in the bare basis up to the standard sign convention.
    CHECK((sum - sigma_minus()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sideband modes are nilpotent, exactly", "[dressed]") {
    const DressedBasis b = dressed_amplitudes({10.0, 0.0, 0.0});
    const auto modes = dressed_modes(b);
    CHECK((modes[0] * modes[0]).cwiseAbs().maxCoeff() == 0.0);
    CHECK((modes[2] * modes[2]).cwiseAbs().maxCoeff() == 0.0);
    // the central mode is not
    CHECK((modes[1] * modes[1]).cwiseAbs().maxCoeff() > 0.0);
}

TEST_CASE("dressed correlators in the strong-drive steady state", "[dressed]") {
    const DressedCorrelators dc = dressed_correlators({10.0, 0.0, 0.0});
    // sideband populations are equal by symmetry
    CHECK(dc.population[0] == Catch::Approx(dc.population[2]).epsilon(1e-6));
    // sideband autocorrelation is exactly zero: the approximation's
    // qualitative failure (the exact filtered value is finite)
    CHECK(dc.numerator(0, 0) == 0.0);
    CHECK(dc.numerator(2, 2) == 0.0);
    CHECK(std::isnan(dc.g2(0, 0)) == false);
    CHECK(dc.g2(0, 0) == 0.0);
    // opposite-sideband cross-correlation: frozen value 2 at strong drive
    CHECK(dc.g2(0, 2) == Catch::Approx(2.0).epsilon(2e-2));
    CHECK(dc.reversed_g2(2, 0) == dc.g2(0, 2));
}

TEST_CASE("dressed vs exact sideband cross-correlation disagree at the tens-of-percent level",
          "[dressed]") {
    const DriveConfig drive{10.0, 0.0, 0.0};
    const DressedCorrelators dc = dressed_correlators(drive);
    const double exact = g2_cross(drive, {-mollow_splitting(drive.Omega),
                                          mollow_splitting(drive.Omega), 1.0});
    // the approximation overshoots (2.0 vs ~1.47); agreement only ~30%
    // relative to the larger value
    const double rel = std::abs(dc.g2(0, 2) - exact) / std::max(dc.g2(0, 2), exact);
    CHECK(rel > 0.15);
    CHECK(rel < 0.45);
}
