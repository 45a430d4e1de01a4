#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "iconn/error.hpp"
#include "iconn/infotheory.hpp"
#include "test_support.hpp"

using namespace iconn;
using iconn::testing::three_var;
using iconn::testing::two_var;

namespace {

// Frozen references: 0.5*log(1.25) and -0.5*log(8/9).
constexpr double kHalfLog125 = 0.11157177565710488;
constexpr double kHalfLog98 = 0.058891517828191756;

std::vector<double> constant(std::size_t n, double v) { return std::vector<double>(n, v); }

}  // namespace

TEST_CASE("trapezoid") {
    const auto grid = FrequencyGrid::uniform(101);
    std::vector<double> ones = constant(101, 1.0);
    CHECK(trapezoid(ones, grid) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
    std::vector<double> lin(101);
    for (std::size_t f = 0; f < lin.size(); ++f) lin[f] = grid[f];
    CHECK(trapezoid(lin, grid) == doctest::Approx(std::numbers::pi * std::numbers::pi / 2));
    CHECK_THROWS_AS(trapezoid(constant(3, 1.0), grid), Error);
}

TEST_CASE("mir_from_coherence") {
    const auto grid = FrequencyGrid::uniform(64);
    SUBCASE("zero coherence gives zero") {
        const auto r = mir_from_coherence(constant(64, 0.0), grid);
        CHECK(r.nats == 0.0);
        CHECK(r.clipped == 0);
    }
    SUBCASE("constant 0.2 gives half log 1.25") {
        CHECK(std::abs(mir_from_coherence(constant(64, 0.2), grid).nats - kHalfLog125) < 1e-14);
    }
    SUBCASE("unit coherence is clipped and finite") {
        const auto r = mir_from_coherence(constant(64, 1.0), grid);
        CHECK(std::isfinite(r.nats));
        CHECK(r.nats == doctest::Approx(-0.5 * std::log1p(-(1.0 - kClipEpsilon))).epsilon(1e-12));
        CHECK(r.clipped == 64);
    }
    SUBCASE("coherence just below one is clipped") {
        CHECK(mir_from_coherence(constant(64, 1.0 - 1e-13), grid).clipped == 64);
        CHECK(mir_from_coherence(constant(64, 1.0 - 1e-6), grid).clipped == 0);
    }
    SUBCASE("coherence above one is a domain error") {
        std::vector<double> bad = constant(64, 0.5);
        bad[10] = 1.1;
        try {
            mir_from_coherence(bad, grid);
            FAIL("expected domain error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Domain);
        }
        CHECK_THROWS_AS(mir_from_coherence(constant(64, -0.1), grid), Error);
    }
    SUBCASE("a single grid point cannot be integrated") {
        CHECK_THROWS_AS(mir_from_coherence(constant(1, 0.2), FrequencyGrid::uniform(1)), Error);
    }
}

TEST_CASE("MIR matrices of the fixtures") {
    const auto grid = FrequencyGrid::uniform(128);
    SUBCASE("two-variable iPDC MIR and its directional asymmetry") {
        const auto m = mir_ipdc(two_var(0.5), grid);
        CHECK(std::abs(m.values(1, 0) - kHalfLog125) < 1e-8);
        CHECK(m.values(0, 1) == 0.0);
    }
    SUBCASE("two-variable iDTF MIR matches iPDC off the diagonal") {
        const auto m = mir_idtf(two_var(0.5), grid);
        CHECK(std::abs(m.values(1, 0) - kHalfLog125) < 1e-8);
        CHECK(m.values(0, 1) == 0.0);
    }
    SUBCASE("augmented iDTF MIR from 1 to 3") {
        const auto m = mir_idtf(three_var(0.5, 1.0), grid);
        CHECK(std::abs(m.values(2, 0) - kHalfLog98) < 1e-8);
        CHECK(std::abs(mir_ipdc(three_var(0.5, 1.0), grid).values(2, 0)) == 0.0);
    }
    SUBCASE("coherence MIR diagonal is clipped and counted") {
        const auto m = mir_coherence(two_var(0.5), grid);
        CHECK(m.clipped(0, 0) == 128);
        CHECK(m.clipped(0, 1) == 0);
        CHECK(m.total_clipped() == 256);
        CHECK(m.values(0, 1) == doctest::Approx(m.values(1, 0)).epsilon(1e-14));
        CHECK(std::abs(m.values(0, 1) - kHalfLog125) < 1e-8);
    }
}

TEST_CASE("bridge to the causality spectrum") {
    SUBCASE("round trip on random K = 2 models") {
        const auto grid = FrequencyGrid::uniform(64);
        std::mt19937_64 rng(17);
        double worst = 0.0;
        for (int n = 0; n < 10; ++n) {
            const VarModel m = oracles::random_stable_model(2, 1 + n % 3, rng);
            const auto pi = ipdc(evaluate_spectra(m, grid), m);
            for (std::size_t i = 0; i < 2; ++i) {
                for (std::size_t j = 0; j < 2; ++j) {
                    if (i == j) continue;
                    const Vector sq = pi.magnitude_squared(i, j);
                    const auto b = geweke_hosoya_bridge(std::span<const double>(sq.data(), sq.size()));
                    for (Eigen::Index f = 0; f < sq.size(); ++f) {
                        worst = std::max(worst, std::abs(1.0 - std::exp(-b.f(f)) - sq(f)));
                    }
                }
            }
        }
        CHECK(worst < 1e-14);
    }
    SUBCASE("constant 0.2 maps to log 1.25") {
        const auto b = geweke_hosoya_bridge(constant(4, 0.2));
        for (Eigen::Index f = 0; f < 4; ++f) CHECK(b.f(f) == doctest::Approx(0.22314355131420976));
    }
}

TEST_CASE("info density integrates to the MIR") {
    const auto grid = FrequencyGrid::uniform(200);
    std::vector<double> c(200);
    for (std::size_t f = 0; f < c.size(); ++f) c[f] = 0.3 + 0.2 * std::cos(grid[f]);
    const auto d = info_density(c);
    CHECK(d.clipped == 0);
    const double direct = trapezoid(std::span<const double>(d.values.data(), d.values.size()), grid);
    CHECK(direct == doctest::Approx(mir_from_coherence(c, grid).nats).epsilon(1e-14));
}

TEST_CASE("quadrature doubling leaves fixture MIR stable") {
    const VarModel m = three_var(0.5, 1.0);
    const auto coarse = mir_idtf(m, FrequencyGrid::uniform(257));
    const auto fine = mir_idtf(m, FrequencyGrid::uniform(513));
    CHECK(std::abs(coarse.values(2, 0) - fine.values(2, 0)) < 1e-8);
    CHECK(std::abs(coarse.values(2, 1) - fine.values(2, 1)) < 1e-8);
}

TEST_CASE("MIR symmetry under conjugation") {
    const auto grid = FrequencyGrid::uniform(64);
    for (const VarModel& m : iconn::testing::random_population(8, 3)) {
        const auto r = mir_symmetry_check(m, grid, 1, 0);
        CHECK(r.pass);
        CHECK(r.max_deviation < 1e-12);
    }
}
