#include <doctest.h>

#include <cmath>
#include <numbers>

#include "iconn/error.hpp"
#include "iconn/spectral.hpp"
#include "test_support.hpp"

using namespace iconn;
using iconn::testing::two_var;
using iconn::testing::unit;

namespace {

double max_dev(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("frequency grid") {
    const auto g = FrequencyGrid::uniform(5);
    CHECK(g.size() == 5);
    CHECK(g[0] == 0.0);
    CHECK(g[4] == std::numbers::pi);
    CHECK(g[2] == doctest::Approx(std::numbers::pi / 2));
    CHECK(FrequencyGrid::uniform().size() == kDefaultGridPoints);
    CHECK(FrequencyGrid::uniform(1).size() == 1);
    CHECK_THROWS_AS(FrequencyGrid({0.0, 0.5, 0.5}), Error);
    CHECK_THROWS_AS(FrequencyGrid({0.0, 4.0}), Error);
    CHECK_THROWS_AS(FrequencyGrid::uniform(0), Error);
}

TEST_CASE("spectra of the two-variable example") {
    const double alpha = 0.5;
    const auto grid = FrequencyGrid::uniform(33);
    const auto spectra = evaluate_spectra(two_var(alpha), grid);
    for (std::size_t f = 0; f < grid.size(); ++f) {
        const double w = grid[f];
        CMatrix a(2, 2);
        a << 1.0, 0.0, -alpha * unit(w, 1), 1.0;
        CHECK(max_dev(spectra.a_bar[f], a) < 1e-15);
        CMatrix s(2, 2);
        s << 1.0, alpha * unit(w, -1), alpha * unit(w, 1), 1.0 + alpha * alpha;
        CHECK(max_dev(spectra.s[f], s) < 1e-14);
    }
}

TEST_CASE("white noise has identity spectra") {
    const auto grid = FrequencyGrid::uniform(9);
    const auto spectra = evaluate_spectra(VarModel(Matrix::Identity(3, 3)), grid);
    const CMatrix eye = CMatrix::Identity(3, 3);
    for (std::size_t f = 0; f < grid.size(); ++f) {
        CHECK(max_dev(spectra.a_bar[f], eye) == 0.0);
        CHECK(max_dev(spectra.h_bar[f], eye) == 0.0);
        CHECK(max_dev(spectra.s[f], eye) == 0.0);
        CHECK(max_dev(spectra.s_inv[f], eye) == 0.0);
    }
}

TEST_CASE("unit root makes A(w) singular at the named frequency") {
    Matrix a(1, 1);
    a << 1.0;
    try {
        evaluate_spectra(VarModel({a}, Matrix::Identity(1, 1)), FrequencyGrid::uniform(8));
        FAIL("expected numerical error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Numerical);
        CHECK(std::string(e.what()).find("w = 0") != std::string::npos);
    }
}

TEST_CASE("partialization of the two-variable example") {
    const double alpha = 0.5;
    const double p1 = 1.0 + alpha * alpha;
    const auto grid = FrequencyGrid::uniform(17);
    const VarModel model = two_var(alpha);
    const auto spectra = evaluate_spectra(model, grid);
    const auto part = partialize(spectra, model);
    for (std::size_t f = 0; f < grid.size(); ++f) {
        const double w = grid[f];
        CHECK(std::abs(part.wiener_filters[f][0](0) - alpha * unit(w, -1) / p1) < 1e-15);
        CHECK(std::abs(part.wiener_filters[f][1](0) - alpha * unit(w, 1)) < 1e-15);
        CHECK(part.partial_spectra[f](0) == doctest::Approx(1.0 / p1).epsilon(1e-14));
        CHECK(part.partial_spectra[f](1) == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(part.rho(0) == 1.0);
    CHECK(part.rho(1) == 1.0);
}

TEST_CASE("diagonal sigma leaves rho equal to sigma") {
    Matrix s = Matrix::Zero(3, 3);
    s.diagonal() << 2.0, 0.5, 3.0;
    Matrix a = Matrix::Zero(3, 3);
    a(0, 2) = 0.3;
    const VarModel model({a}, s);
    const auto part = partialize(evaluate_spectra(model, FrequencyGrid::uniform(4)), model);
    CHECK((part.rho - s.diagonal()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single channel partialization convention") {
    Matrix a(1, 1);
    a << 0.4;
    Matrix s(1, 1);
    s << 2.0;
    const VarModel model({a}, s);
    const auto spectra = evaluate_spectra(model, FrequencyGrid::uniform(5));
    const auto part = partialize(spectra, model);
    CHECK(part.rho(0) == 2.0);
    for (std::size_t f = 0; f < 5; ++f) {
        CHECK(part.partial_spectra[f](0) == spectra.s[f](0, 0).real());
    }
}

TEST_CASE("partial spectrum from the inverse quadratic form") {
    SUBCASE("two-variable example, first channel") {
        const auto grid = FrequencyGrid::uniform(9);
        const VarModel model = two_var(0.5);
        const Vector v = partial_spectrum_via_lemma(evaluate_spectra(model, grid), model, 0);
        for (Eigen::Index f = 0; f < v.size(); ++f) CHECK(v(f) == doctest::Approx(0.8).epsilon(1e-14));
    }
    SUBCASE("unit column gives one") {
        const auto grid = FrequencyGrid::uniform(9);
        const VarModel model = two_var(0.5);
        const Vector v = partial_spectrum_via_lemma(evaluate_spectra(model, grid), model, 1);
        for (Eigen::Index f = 0; f < v.size(); ++f) CHECK(v(f) == 1.0);
    }
}

TEST_CASE("spectral identities on random models") {
    const auto grid = FrequencyGrid::uniform(64);
    double ah = 0.0, ssinv = 0.0, herm = 0.0, lemma = 0.0, power = -1.0;
    bool rho_ok = true;
    for (const VarModel& model : iconn::testing::random_population(24, 314)) {
        const std::size_t k = model.channels();
        const auto spectra = evaluate_spectra(model, grid);
        const auto part = partialize(spectra, model);
        const CMatrix eye = CMatrix::Identity(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
        for (std::size_t f = 0; f < grid.size(); ++f) {
            ah = std::max(ah, max_dev(spectra.a_bar[f] * spectra.h_bar[f], eye));
            ssinv = std::max(ssinv, max_dev(spectra.s_inv[f] * spectra.s[f], eye));
            herm = std::max(herm, max_dev(spectra.s[f], spectra.s[f].adjoint()));
            herm = std::max(herm, max_dev(spectra.s_inv[f], spectra.s_inv[f].adjoint()));
            for (std::size_t c = 0; c < k; ++c) {
                const auto ci = static_cast<Eigen::Index>(c);
                CHECK(spectra.s[f](ci, ci).real() > 0.0);
                CHECK(part.partial_spectra[f](ci) > 0.0);
                power = std::max(power, part.partial_spectra[f](ci) - spectra.s[f](ci, ci).real());
            }
        }
        for (std::size_t j = 0; j < k; ++j) {
            const auto ji = static_cast<Eigen::Index>(j);
            const Vector v = partial_spectrum_via_lemma(spectra, model, j);
            for (std::size_t f = 0; f < grid.size(); ++f) {
                lemma = std::max(lemma, std::abs(v(static_cast<Eigen::Index>(f)) - part.partial_spectra[f](ji)));
            }
            rho_ok = rho_ok && part.rho(ji) > 0.0 && part.rho(ji) <= model.sigma()(ji, ji);
        }
    }
    CHECK(ah < 1e-12);
    CHECK(ssinv < 1e-10);
    CHECK(herm == 0.0);
    CHECK(lemma < 1e-10);
    CHECK(power <= 1e-12);
    CHECK(rho_ok);
}
