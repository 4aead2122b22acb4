#include <catch2/catch_amalgamated.hpp>

#include "fcorr/inequalities.hpp"
#include "fcorr/validate.hpp"

using namespace fcorr;

namespace {

MomentTable table_from(double n1, double n2, double auto1, double auto2, double cross,
                       Complex coh = 0.0, Complex transfer1 = 0.0, Complex transfer2 = 0.0) {
    MomentTable t;
    t.n1 = n1;
    t.n2 = n2;
    t.g4[{2, 0, 2, 0}] = auto1;
    t.g4[{0, 2, 0, 2}] = auto2;
    t.g4[{1, 1, 1, 1}] = cross;
    t.g4[{2, 0, 0, 2}] = coh; // <a1+2 a2^2>
    t.g4[{0, 2, 2, 0}] = std::conj(coh);
    t.g4[{2, 0, 1, 1}] = transfer1;
    t.g4[{1, 1, 2, 0}] = std::conj(transfer1);
    t.g4[{1, 1, 0, 2}] = transfer2;
    t.g4[{0, 2, 1, 1}] = std::conj(transfer2);
    t.epsilon_used = 1.0;
    return t;
}

} // namespace

TEST_CASE("moment-table validation catches unphysical input", "[inequalities]") {
    MomentTable t = table_from(1, 1, 1, 1, 1);
    CHECK_NOTHROW(validate_moment_table(t));
    SECTION("broken conjugate symmetry") {
        t.g4[{2, 0, 0, 2}] = Complex(0.3, 0.1);
        t.g4[{0, 2, 2, 0}] = Complex(0.3, 0.1); // should be the conjugate
        CHECK_THROWS_AS(validate_moment_table(t), ValidationError);
    }
    SECTION("negative diagonal") {
        t.g4[{1, 1, 1, 1}] = -0.5;
        CHECK_THROWS_AS(validate_moment_table(t), ValidationError);
    }
    SECTION("complex diagonal") {
        t.g4[{2, 0, 2, 0}] = Complex(1.0, 0.2);
        t.g4.erase({2, 0, 2, 0}); // leave only via conjugate lookup
        t.g4[{2, 0, 2, 0}] = Complex(1.0, 0.2);
        CHECK_THROWS_AS(validate_moment_table(t), ValidationError);
    }
}

TEST_CASE("CSI of a |1,1> photon pair diverges, CHSH saturates Tsirelson", "[inequalities]") {
    // |11>: only the cross moment survives.
    const MomentTable t = table_from(1, 1, 0, 0, 1);
    CHECK_THROWS_AS(csi_ratio(t), UndefinedCorrelationError);
    const InequalityResult b = chsh_B_standard(t);
    CHECK(b.value == Catch::Approx(2.0 * std::sqrt(2.0)).margin(1e-14));
    CHECK(b.violated);
    CHECK(b.bound == 2.0);
    CHECK(b.quantum_max == Catch::Approx(2.0 * std::sqrt(2.0)));
    CHECK(chsh_B_general(t).value == Catch::Approx(2.0 * std::sqrt(2.0)).margin(1e-12));
}

TEST_CASE("independent coherent beams stay classical", "[inequalities]") {
    // alpha = beta = 1: every normally ordered moment is 1.
    const MomentTable t = table_from(1, 1, 1, 1, 1, 1.0, 1.0, 1.0);
    const InequalityResult r = csi_ratio(t);
    CHECK(r.value == Catch::Approx(1.0).margin(1e-14));
    CHECK_FALSE(r.violated);
    const InequalityResult b = chsh_B_standard(t);
    CHECK(b.value == Catch::Approx(std::sqrt(2.0)).margin(1e-14));
    CHECK_FALSE(b.violated);
}

TEST_CASE("thermal-like uncorrelated beams", "[inequalities]") {
    // Independent thermal modes: auto = 2 n^2, cross = n1 n2, no coherences.
    const MomentTable t = table_from(0.5, 0.25, 2 * 0.25, 2 * 0.0625, 0.125);
    CHECK(csi_ratio(t).value == Catch::Approx(0.25).margin(1e-14));
    CHECK_FALSE(chsh_B_standard(t).violated);
}

TEST_CASE("closed form equals general angles at the standard set", "[inequalities]") {
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    for (int k = 0; k < 100; ++k) {
        const MomentTable t = random_physical_moment_table(rng);
        worst = std::max(worst, std::abs(chsh_B_standard(t).value - chsh_B_general(t).value));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("B is invariant under uniform rescaling of the moments", "[inequalities]") {
    std::mt19937_64 rng(7);
    MomentTable t = random_physical_moment_table(rng);
    const double b0 = chsh_B_standard(t).value;
    const double r0 = csi_ratio(t).value;
    for (auto& [k, v] : t.g4)
        v *= 3.7;
    t.n1 *= 3.7;
    t.n2 *= 3.7;
    CHECK(chsh_B_standard(t).value == Catch::Approx(b0).epsilon(1e-12));
    CHECK(csi_ratio(t).value == Catch::Approx(r0).epsilon(1e-12));
}

TEST_CASE("angle structure of the correlator", "[inequalities]") {
    std::mt19937_64 rng(11);
    const MomentTable t = random_physical_moment_table(rng);
    const auto c = detail::chsh_moments(t);
    // E(0, 0) reads the population-difference correlator directly.
    CHECK(chsh_E(t, 0.0, 0.0) == Catch::Approx(c.nn / c.sum).margin(1e-12));
    // Quarter-wave rotation on both arms flips the sign.
    CHECK(chsh_E(t, M_PI / 2, M_PI / 2) == Catch::Approx(c.nn / c.sum).margin(1e-12));
    CHECK(chsh_E(t, 0.0, M_PI / 2) == Catch::Approx(-c.nn / c.sum).margin(1e-12));
}

TEST_CASE("coherence-dropping approximation can be badly wrong", "[inequalities]") {
    // A table dominated by the two-photon coherence: the approximation
    // discards the term and underestimates B.
    const MomentTable t = table_from(1, 1, 1, 1, 0.05, Complex(-0.95, 0));
    const double full = chsh_B_standard(t).value;
    const double approx = chsh_B_approx(t).value;
    CHECK(full > approx + 1.0);
    // ... and agrees when the coherence vanishes.
    const MomentTable t2 = table_from(1, 1, 1, 1, 0.4);
    CHECK(chsh_B_standard(t2).value == Catch::Approx(chsh_B_approx(t2).value).margin(1e-14));
}

TEST_CASE("degenerate denominators are reported, not propagated", "[inequalities]") {
    const MomentTable vac = table_from(0, 0, 0, 0, 0);
    CHECK_THROWS_AS(csi_ratio(vac), UndefinedCorrelationError);
    CHECK_THROWS_AS(chsh_B_standard(vac), UndefinedCorrelationError);
    CHECK_THROWS_AS(chsh_E(vac, 0, 0), UndefinedCorrelationError);
}

TEST_CASE("standard angle set", "[inequalities]") {
    const AngleSet a = standard_angles();
    CHECK(a.theta == 0.0);
    CHECK(a.theta_prime == Catch::Approx(M_PI / 4));
    CHECK(a.phi == Catch::Approx(M_PI / 8));
    CHECK(a.phi_prime == Catch::Approx(3 * M_PI / 8));
}
