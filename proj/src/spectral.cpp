#include "iconn/spectral.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "iconn/error.hpp"

namespace iconn {

namespace {

double condition_number(const CMatrix& m) {
    Eigen::JacobiSVD<CMatrix> svd(m);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    return smin > 0.0 ? sv(0) / smin : std::numeric_limits<double>::infinity();
}

Matrix inverse_spd(const Matrix& sigma) {
    Eigen::LLT<Matrix> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorKind::Numerical, "innovation covariance is not positive definite");
    }
    return llt.solve(Matrix::Identity(sigma.rows(), sigma.cols()));
}

}  // namespace

FrequencyGrid FrequencyGrid::uniform(std::size_t n_points) {
    if (n_points < 1) {
        throw Error(ErrorKind::Domain, "frequency grid needs at least one point");
    }
    std::vector<double> pts(n_points, 0.0);
    for (std::size_t k = 1; k < n_points; ++k) {
        pts[k] = std::numbers::pi * static_cast<double>(k) / static_cast<double>(n_points - 1);
    }
    if (n_points > 1) pts.back() = std::numbers::pi;
    return FrequencyGrid(std::move(pts));
}

FrequencyGrid::FrequencyGrid(std::vector<double> points) : points_(std::move(points)) {
    if (points_.empty()) {
        throw Error(ErrorKind::Domain, "frequency grid needs at least one point");
    }
    for (std::size_t k = 0; k < points_.size(); ++k) {
        const double w = points_[k];
        if (!(w >= 0.0 && w <= std::numbers::pi)) {
            std::ostringstream msg;
            msg << "frequency " << w << " outside [0, pi]";
            throw Error(ErrorKind::Domain, msg.str());
        }
        if (k > 0 && !(w > points_[k - 1])) {
            throw Error(ErrorKind::Domain, "frequency grid must be strictly increasing");
        }
    }
}

CMatrix a_bar_at(const VarModel& model, double omega) {
    const auto k = static_cast<Eigen::Index>(model.channels());
    CMatrix a = CMatrix::Identity(k, k);
    for (std::size_t l = 1; l <= model.order(); ++l) {
        const Complex phase = std::polar(1.0, -omega * static_cast<double>(l));
        a -= model.coeff(l).cast<Complex>() * phase;
    }
    return a;
}

SpectralSet evaluate_spectra(const VarModel& model, const FrequencyGrid& grid) {
    const auto k = static_cast<Eigen::Index>(model.channels());
    const CMatrix sigma = model.sigma().cast<Complex>();
    const CMatrix sigma_inv = inverse_spd(model.sigma()).cast<Complex>();
    const CMatrix eye = CMatrix::Identity(k, k);

    SpectralSet out{grid, {}, {}, {}, {}};
    const std::size_t nf = grid.size();
    out.a_bar.reserve(nf);
    out.h_bar.reserve(nf);
    out.s.reserve(nf);
    out.s_inv.reserve(nf);

    for (std::size_t f = 0; f < nf; ++f) {
        CMatrix a = a_bar_at(model, grid[f]);
        const double cond = condition_number(a);
        if (!(cond <= kConditionLimit)) {
            std::ostringstream msg;
            msg << "A(w) is numerically singular at w = " << grid[f] << " (condition number "
                << cond << ")";
            throw Error(ErrorKind::Numerical, msg.str());
        }
        CMatrix h = a.partialPivLu().solve(eye);
        CMatrix s = h * sigma * h.adjoint();
        s = (0.5 * (s + s.adjoint())).eval();
        CMatrix s_inv = a.adjoint() * sigma_inv * a;
        s_inv = (0.5 * (s_inv + s_inv.adjoint())).eval();

        out.a_bar.push_back(std::move(a));
        out.h_bar.push_back(std::move(h));
        out.s.push_back(std::move(s));
        out.s_inv.push_back(std::move(s_inv));
    }
    return out;
}

std::vector<Eigen::Index> other_channels(std::size_t k_channels, std::size_t k) {
    std::vector<Eigen::Index> idx;
    idx.reserve(k_channels > 0 ? k_channels - 1 : 0);
    for (std::size_t l = 0; l < k_channels; ++l) {
        if (l != k) idx.push_back(static_cast<Eigen::Index>(l));
    }
    return idx;
}

PartializationSet partialize(const SpectralSet& spectra, const VarModel& model) {
    const std::size_t kc = model.channels();
    const auto k = static_cast<Eigen::Index>(kc);
    const std::size_t nf = spectra.grid.size();

    PartializationSet out;
    out.partial_spectra.assign(nf, Vector::Zero(k));
    out.wiener_filters.assign(nf, std::vector<CRowVector>(kc));

    for (std::size_t f = 0; f < nf; ++f) {
        const CMatrix& s = spectra.s[f];
        for (std::size_t c = 0; c < kc; ++c) {
            const auto ci = static_cast<Eigen::Index>(c);
            if (kc == 1) {
                out.partial_spectra[f](ci) = s(0, 0).real();
                out.wiener_filters[f][c] = CRowVector(0);
                continue;
            }
            const auto rest = other_channels(kc, c);
            const CRowVector s_row = s(ci, rest);
            const CVector s_col = s(rest, ci);
            const CMatrix block = s(rest, rest);
            const double cond = condition_number(block);
            if (!(cond <= kConditionLimit)) {
                std::ostringstream msg;
                msg << "spectral block excluding channel " << c + 1
                    << " is singular at w = " << spectra.grid[f] << " (condition number "
                    << cond << ")";
                throw Error(ErrorKind::Numerical, msg.str());
            }
            // g = s_row * block^{-1}  <=>  block^T g^T = s_row^T
            CRowVector g = block.transpose().partialPivLu().solve(s_row.transpose()).transpose();
            out.partial_spectra[f](ci) = (s(ci, ci) - (g * s_col)(0, 0)).real();
            out.wiener_filters[f][c] = std::move(g);
        }
    }

    const Matrix& sigma = model.sigma();
    out.rho = Vector(k);
    out.sigma_cross.resize(kc);
    out.sigma_rest.resize(kc);
    for (std::size_t j = 0; j < kc; ++j) {
        const auto ji = static_cast<Eigen::Index>(j);
        if (kc == 1) {
            out.rho(ji) = sigma(0, 0);
            out.sigma_cross[j] = Vector(0);
            out.sigma_rest[j] = Matrix(0, 0);
            continue;
        }
        const auto rest = other_channels(kc, j);
        Vector cross = sigma(rest, ji);
        Matrix block = sigma(rest, rest);
        Eigen::LLT<Matrix> llt(block);
        if (llt.info() != Eigen::Success) {
            throw Error(ErrorKind::Numerical, "innovation covariance is not positive definite");
        }
        out.rho(ji) = sigma(ji, ji) - cross.dot(llt.solve(cross));
        out.sigma_cross[j] = std::move(cross);
        out.sigma_rest[j] = std::move(block);
    }
    return out;
}

Vector partial_spectrum_via_lemma(const SpectralSet& spectra, const VarModel& model,
                                  std::size_t j) {
    if (j >= model.channels()) {
        throw Error(ErrorKind::Domain, "channel index out of range");
    }
    const CMatrix sigma_inv = inverse_spd(model.sigma()).cast<Complex>();
    const auto ji = static_cast<Eigen::Index>(j);
    Vector out(static_cast<Eigen::Index>(spectra.grid.size()));
    for (std::size_t f = 0; f < spectra.grid.size(); ++f) {
        const CVector a_j = spectra.a_bar[f].col(ji);
        const double q = (a_j.adjoint() * sigma_inv * a_j)(0, 0).real();
        out(static_cast<Eigen::Index>(f)) = 1.0 / q;
    }
    return out;
}

}  // namespace iconn
