#include <doctest.h>

#include <cmath>

#include "iconn/error.hpp"
#include "iconn/measures.hpp"
#include "iconn/oracles.hpp"
#include "test_support.hpp"

using namespace iconn;
using iconn::testing::two_var;
using iconn::testing::unit;

TEST_CASE("coherence oracles match the measures on random models") {
    const auto grid = FrequencyGrid::uniform(64);
    double t1 = 0.0, t2 = 0.0;
    for (const VarModel& m : iconn::testing::random_population(12, 606)) {
        const auto spectra = evaluate_spectra(m, grid);
        const auto pi = ipdc(spectra, m);
        const auto gamma = idtf(spectra, partialize(spectra, m), m);
        for (std::size_t i = 0; i < m.channels(); ++i) {
            for (std::size_t j = 0; j < m.channels(); ++j) {
                const auto r1 = oracles::theorem1_rhs(m, grid, i, j);
                const auto r2 = oracles::theorem2_rhs(m, grid, i, j);
                const auto ii = static_cast<Eigen::Index>(i);
                const auto ji = static_cast<Eigen::Index>(j);
                for (std::size_t f = 0; f < grid.size(); ++f) {
                    t1 = std::max(t1, std::abs(r1[f] - pi.values[f](ii, ji)));
                    t2 = std::max(t2, std::abs(r2[f] - gamma.values[f](ii, ji)));
                }
            }
        }
    }
    CHECK(t1 < 1e-10);
    CHECK(t2 < 1e-10);
}

TEST_CASE("orthogonality of eta_j to the other channels") {
    const auto grid = FrequencyGrid::uniform(32);
    for (const VarModel& m : iconn::testing::random_population(8, 9)) {
        const auto spectra = evaluate_spectra(m, grid);
        for (std::size_t f = 0; f < grid.size(); ++f) {
            for (std::size_t l = 0; l < m.channels(); ++l) {
                for (std::size_t j = 0; j < m.channels(); ++j) {
                    if (l == j) continue;
                    CHECK(std::abs(oracles::orthogonality_bracket(spectra, f, l, j)) < 1e-10);
                }
            }
        }
    }
}

TEST_CASE("worked cross-spectrum of the two-variable example") {
    const double alpha = 0.5;
    const auto grid = FrequencyGrid::uniform(16);
    const VarModel m = two_var(alpha);
    const auto spectra = evaluate_spectra(m, grid);
    for (std::size_t f = 0; f < grid.size(); ++f) {
        // S_{w2 eta1} = sum_l Ā_2l * bracket(l, 1)
        Complex s = 0.0;
        for (std::size_t l = 0; l < 2; ++l) {
            s += spectra.a_bar[f](1, static_cast<Eigen::Index>(l)) *
                 oracles::orthogonality_bracket(spectra, f, l, 0);
        }
        CHECK(std::abs(s - (-alpha * unit(grid[f], 1) / (1 + alpha * alpha))) < 1e-15);
    }
}

TEST_CASE("transfer function identity") {
    const auto grid = FrequencyGrid::uniform(32);
    for (const VarModel& m : iconn::testing::random_population(8, 10)) {
        for (std::size_t i = 0; i < m.channels(); ++i)
            for (std::size_t j = 0; j < m.channels(); ++j)
                CHECK(oracles::transfer_function_identity(m, grid, i, j) < 1e-10);
    }
}

TEST_CASE("random stable models") {
    std::mt19937_64 rng(1);
    for (int n = 0; n < 20; ++n) {
        const VarModel m = oracles::random_stable_model(2 + n % 4, 1 + n % 3, rng);
        const auto r = validate(m);
        CHECK(r.stable);
        CHECK(r.spectral_radius < 0.9);
        CHECK(r.sigma_ok);
        CHECK_FALSE(m.sigma().isDiagonal());
    }
    std::mt19937_64 a(5), b(5);
    CHECK(oracles::random_stable_model(3, 2, a).coeff(2) == oracles::random_stable_model(3, 2, b).coeff(2));
}

TEST_CASE("fixture tables agree with the library") {
    const auto grid = FrequencyGrid::uniform(32);
    SUBCASE("two_var_alpha") {
        const auto fx = oracles::fixture("two_var_alpha", 0.5, 1.0, grid);
        const auto spectra = evaluate_spectra(fx.model, grid);
        const auto part = partialize(spectra, fx.model);
        const auto pi = ipdc(spectra, fx.model);
        const auto gamma = idtf(spectra, part, fx.model);
        for (std::size_t f = 0; f < grid.size(); ++f) {
            CHECK(std::abs(fx.table("ipdc", 1, 0).values[f] - pi.values[f](1, 0)) < 1e-12);
            CHECK(std::abs(fx.table("ipdc", 0, 1).values[f] - pi.values[f](0, 1)) < 1e-12);
            CHECK(std::abs(fx.table("idtf", 1, 0).values[f] - gamma.values[f](1, 0)) < 1e-12);
            CHECK(std::abs(fx.table("s", 1, 0).values[f] - spectra.s[f](1, 0)) < 1e-12);
            CHECK(std::abs(fx.table("s", 0, 1).values[f] - spectra.s[f](0, 1)) < 1e-12);
            CHECK(std::abs(fx.table("partial", 0, 0).values[f] - part.partial_spectra[f](0)) < 1e-12);
            CHECK(std::abs(fx.table("wiener", 0, 0).values[f] - part.wiener_filters[f][0](0)) < 1e-12);
            CHECK(std::norm(fx.table("ipdc", 1, 0).values[f]) == doctest::Approx(0.2).epsilon(1e-13));
        }
    }
    SUBCASE("three_var_alpha_beta") {
        const auto fx = oracles::fixture("three_var_alpha_beta", 0.5, 1.0, grid);
        const auto spectra = evaluate_spectra(fx.model, grid);
        const auto pi = ipdc(spectra, fx.model);
        const auto gamma = idtf(spectra, partialize(spectra, fx.model), fx.model);
        for (const auto& t : fx.tables) {
            const auto ii = static_cast<Eigen::Index>(t.i);
            const auto ji = static_cast<Eigen::Index>(t.j);
            for (std::size_t f = 0; f < grid.size(); ++f) {
                Complex lib;
                if (t.quantity == "ipdc") lib = pi.values[f](ii, ji);
                else if (t.quantity == "idtf") lib = gamma.values[f](ii, ji);
                else if (t.quantity == "s") lib = spectra.s[f](ii, ji);
                else continue;
                CHECK(std::abs(t.values[f] - lib) < 1e-12);
            }
        }
        for (std::size_t f = 0; f < grid.size(); ++f) {
            CHECK(std::norm(fx.table("idtf", 2, 0).values[f]) == doctest::Approx(1.0 / 9.0).epsilon(1e-13));
            CHECK(std::norm(fx.table("ipdc", 2, 1).values[f]) == doctest::Approx(0.5).epsilon(1e-13));
        }
    }
    SUBCASE("unknown names") {
        try {
            oracles::fixture("four_var", 0.5, 1.0, grid);
            FAIL("expected config error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Config);
        }
        const auto fx = oracles::fixture("two_var_alpha", 0.5, 1.0, grid);
        CHECK_THROWS_AS(fx.table("coh", 0, 1), Error);
    }
}

TEST_CASE("oracles need two channels") {
    Matrix a(1, 1);
    a << 0.3;
    const VarModel m({a}, Matrix::Identity(1, 1));
    CHECK_THROWS_AS(oracles::theorem1_rhs(m, FrequencyGrid::uniform(4), 0, 0), Error);
}
