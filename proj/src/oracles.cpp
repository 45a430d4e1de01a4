#include "iconn/oracles.hpp"

#include <cmath>
#include <sstream>

#include "iconn/error.hpp"

namespace iconn::oracles {

namespace {

void check_pair(const VarModel& model, std::size_t i, std::size_t j) {
    if (model.channels() < 2) {
        throw Error(ErrorKind::Domain, "the coherence identities need at least two channels");
    }
    if (i >= model.channels() || j >= model.channels()) {
        throw Error(ErrorKind::Domain, "channel index out of range");
    }
}

Eigen::Index idx(std::size_t v) { return static_cast<Eigen::Index>(v); }

}  // namespace

Complex orthogonality_bracket(const SpectralSet& spectra, std::size_t f, std::size_t l,
                              std::size_t j) {
    const CMatrix& s = spectra.s.at(f);
    const auto kc = static_cast<std::size_t>(s.rows());
    const auto rest = other_channels(kc, j);
    const CMatrix block = s(rest, rest);
    Eigen::LDLT<CMatrix> ldlt(block);
    if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().real().minCoeff() > 0.0)) {
        std::ostringstream msg;
        msg << "spectral block excluding channel " << j + 1 << " is singular at w = "
            << spectra.grid[f];
        throw Error(ErrorKind::Numerical, msg.str());
    }
    const CVector to_j = s(rest, idx(j));
    const CRowVector from_l = s(idx(l), rest);
    return s(idx(l), idx(j)) - (from_l * ldlt.solve(to_j))(0, 0);
}

std::vector<Complex> theorem1_rhs(const VarModel& model, const FrequencyGrid& grid,
                                  std::size_t i, std::size_t j) {
    check_pair(model, i, j);
    const SpectralSet spectra = evaluate_spectra(model, grid);
    const std::size_t kc = model.channels();
    const double sigma_ii = model.sigma()(idx(i), idx(i));

    std::vector<Complex> out(grid.size());
    for (std::size_t f = 0; f < grid.size(); ++f) {
        const CMatrix& a = spectra.a_bar[f];
        Complex cross{0.0, 0.0};
        for (std::size_t l = 0; l < kc; ++l) {
            cross += a(idx(i), idx(l)) * orthogonality_bracket(spectra, f, l, j);
        }
        const double partial = orthogonality_bracket(spectra, f, j, j).real();
        out[f] = cross / std::sqrt(sigma_ii * partial);
    }
    return out;
}

std::vector<Complex> theorem2_rhs(const VarModel& model, const FrequencyGrid& grid,
                                  std::size_t i, std::size_t j) {
    check_pair(model, i, j);
    const SpectralSet spectra = evaluate_spectra(model, grid);
    const std::size_t kc = model.channels();
    const Matrix& sigma = model.sigma();

    // zeta_j = c^T w with c = e_j - (regression of w_j on the other innovations).
    const auto rest = other_channels(kc, j);
    const Matrix rest_cov = sigma(rest, rest);
    const Vector cross = sigma(rest, idx(j));
    const Vector b = rest_cov.ldlt().solve(cross);
    Vector c = Vector::Zero(idx(kc));
    c(idx(j)) = 1.0;
    for (std::size_t r = 0; r < rest.size(); ++r) c(rest[r]) = -b(idx(r));

    const Vector cov_w_zeta = sigma * c;
    const double zeta_var = c.dot(cov_w_zeta);

    std::vector<Complex> out(grid.size());
    for (std::size_t f = 0; f < grid.size(); ++f) {
        const CMatrix& h = spectra.h_bar[f];
        Complex s_x_zeta{0.0, 0.0};
        for (std::size_t l = 0; l < kc; ++l) s_x_zeta += h(idx(i), idx(l)) * cov_w_zeta(idx(l));
        const double s_ii = spectra.s[f](idx(i), idx(i)).real();
        out[f] = s_x_zeta / std::sqrt(s_ii * zeta_var);
    }
    return out;
}

double transfer_function_identity(const VarModel& model, const FrequencyGrid& grid,
                                  std::size_t i, std::size_t j) {
    check_pair(model, i, j);
    const SpectralSet spectra = evaluate_spectra(model, grid);
    double worst = 0.0;
    for (std::size_t f = 0; f < grid.size(); ++f) {
        Complex cross{0.0, 0.0};
        for (std::size_t l = 0; l < model.channels(); ++l) {
            cross += spectra.a_bar[f](idx(i), idx(l)) * orthogonality_bracket(spectra, f, l, j);
        }
        const double partial = orthogonality_bracket(spectra, f, j, j).real();
        worst = std::max(worst, std::abs(spectra.a_bar[f](idx(i), idx(j)) - cross / partial));
    }
    return worst;
}

VarModel random_stable_model(std::size_t channels, std::size_t order, std::mt19937_64& rng,
                             double max_radius) {
    if (channels < 1) throw Error(ErrorKind::Domain, "need at least one channel");
    std::normal_distribution<double> normal(0.0, 1.0);
    const auto k = idx(channels);
    const double scale =
        order == 0 ? 0.0 : 0.6 / std::sqrt(static_cast<double>(channels * order));

    Matrix g(k, k);
    for (Eigen::Index r = 0; r < k; ++r)
        for (Eigen::Index c = 0; c < k; ++c) g(r, c) = normal(rng);
    Matrix sigma = g * g.transpose() + 0.1 * Matrix::Identity(k, k);
    sigma = 0.5 * (sigma + sigma.transpose());

    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<Matrix> coeffs;
        coeffs.reserve(order);
        for (std::size_t l = 0; l < order; ++l) {
            Matrix a(k, k);
            for (Eigen::Index r = 0; r < k; ++r)
                for (Eigen::Index c = 0; c < k; ++c) a(r, c) = scale * normal(rng);
            coeffs.push_back(std::move(a));
        }
        VarModel model(std::move(coeffs), sigma);
        if (validate(model).spectral_radius < max_radius) return model;
    }
    throw Error(ErrorKind::Numerical, "could not draw a stable model");
}

const FixtureTable& Fixture::table(std::string_view quantity, std::size_t i,
                                   std::size_t j) const {
    for (const FixtureTable& t : tables) {
        if (t.quantity == quantity && t.i == i && t.j == j) return t;
    }
    std::ostringstream msg;
    msg << "fixture " << name << " has no table " << quantity << "[" << i << "," << j << "]";
    throw Error(ErrorKind::Config, msg.str());
}

Fixture fixture(std::string_view name, double alpha, double beta, const FrequencyGrid& grid) {
    if (!std::isfinite(alpha) || !std::isfinite(beta)) {
        throw Error(ErrorKind::Domain, "fixture parameters must be finite");
    }
    auto table = [&grid](std::string q, std::size_t i, std::size_t j, auto fn) {
        FixtureTable t{std::move(q), i, j, std::vector<Complex>(grid.size())};
        for (std::size_t f = 0; f < grid.size(); ++f) t.values[f] = fn(grid[f]);
        return t;
    };
    auto z = [](double w, double lag) { return std::polar(1.0, -w * lag); };
    auto zero = [](double) { return Complex{0.0, 0.0}; };

    if (name == "two_var_alpha") {
        Matrix a = Matrix::Zero(2, 2);
        a(1, 0) = alpha;
        const double n1 = std::sqrt(1.0 + alpha * alpha);
        const double p1 = 1.0 + alpha * alpha;
        Fixture fx{std::string(name), VarModel({a}, Matrix::Identity(2, 2)), {}};
        fx.tables.push_back(table("ipdc", 1, 0, [&](double w) { return -alpha * z(w, 1) / n1; }));
        fx.tables.push_back(table("ipdc", 0, 1, zero));
        fx.tables.push_back(table("idtf", 1, 0, [&](double w) { return alpha * z(w, 1) / n1; }));
        fx.tables.push_back(table("idtf", 0, 1, zero));
        fx.tables.push_back(table("s", 0, 0, [](double) { return Complex{1.0, 0.0}; }));
        fx.tables.push_back(table("s", 0, 1, [&](double w) { return alpha * z(w, -1); }));
        fx.tables.push_back(table("s", 1, 0, [&](double w) { return alpha * z(w, 1); }));
        fx.tables.push_back(table("s", 1, 1, [&](double) { return Complex{p1, 0.0}; }));
        // g_1 has a single entry (against channel 2); g_2 likewise against channel 1.
        fx.tables.push_back(table("wiener", 0, 0, [&](double w) { return alpha * z(w, -1) / p1; }));
        fx.tables.push_back(table("wiener", 1, 0, [&](double w) { return alpha * z(w, 1); }));
        fx.tables.push_back(table("partial", 0, 0, [&](double) { return Complex{1.0 / p1, 0.0}; }));
        fx.tables.push_back(table("partial", 1, 1, [](double) { return Complex{1.0, 0.0}; }));
        return fx;
    }
    if (name == "three_var_alpha_beta") {
        Matrix a = Matrix::Zero(3, 3);
        a(1, 0) = alpha;
        a(2, 1) = beta;
        const double n21 = std::sqrt(1.0 + alpha * alpha);
        const double n32 = std::sqrt(1.0 + beta * beta);
        const double s33 = 1.0 + beta * beta + alpha * alpha * beta * beta;
        const double n3 = std::sqrt(s33);
        Fixture fx{std::string(name), VarModel({a}, Matrix::Identity(3, 3)), {}};
        fx.tables.push_back(table("ipdc", 1, 0, [&](double w) { return -alpha * z(w, 1) / n21; }));
        fx.tables.push_back(table("ipdc", 2, 1, [&](double w) { return -beta * z(w, 1) / n32; }));
        fx.tables.push_back(table("ipdc", 2, 0, zero));
        fx.tables.push_back(table("idtf", 1, 0, [&](double w) { return alpha * z(w, 1) / n21; }));
        fx.tables.push_back(table("idtf", 2, 1, [&](double w) { return beta * z(w, 1) / n3; }));
        fx.tables.push_back(
            table("idtf", 2, 0, [&](double w) { return alpha * beta * z(w, 2) / n3; }));
        fx.tables.push_back(table("idtf", 0, 1, zero));
        fx.tables.push_back(table("idtf", 0, 2, zero));
        fx.tables.push_back(table("idtf", 1, 2, zero));
        fx.tables.push_back(table("s", 1, 1, [&](double) { return Complex{n21 * n21, 0.0}; }));
        fx.tables.push_back(table("s", 2, 2, [&](double) { return Complex{s33, 0.0}; }));
        return fx;
    }
    std::ostringstream msg;
    msg << "unknown fixture '" << name << "' (expected two_var_alpha or three_var_alpha_beta)";
    throw Error(ErrorKind::Config, msg.str());
}

}  // namespace iconn::oracles
