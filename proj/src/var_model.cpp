#include "iconn/var_model.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "iconn/error.hpp"

namespace iconn {

namespace {

constexpr double kSymmetryTolerance = 1e-9;
constexpr double kRankThreshold = 1e-10;

void check_sigma(const Matrix& sigma) {
    if (sigma.rows() < 1 || sigma.rows() != sigma.cols()) {
        throw Error(ErrorKind::Structure, "sigma must be a non-empty square matrix");
    }
    if (!sigma.allFinite()) {
        throw Error(ErrorKind::Data, "sigma contains non-finite entries");
    }
    const double scale = std::max(1.0, sigma.cwiseAbs().maxCoeff());
    const double asym = (sigma - sigma.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTolerance * scale) {
        std::ostringstream msg;
        msg << "sigma is not symmetric (max |sigma - sigma^T| = " << asym << ")";
        throw Error(ErrorKind::Domain, msg.str());
    }
}

struct LsFit {
    std::vector<Matrix> coeffs;
    Matrix sigma;
};

// Regress x(n) on x(n-1..n-order) for n = first..N-1. `x` is already demeaned.
LsFit fit_least_squares(const Matrix& x, std::size_t order, std::size_t first) {
    const auto n_total = static_cast<Eigen::Index>(x.rows());
    const auto k = static_cast<Eigen::Index>(x.cols());
    const auto p = static_cast<Eigen::Index>(order);
    const Eigen::Index n_used = n_total - static_cast<Eigen::Index>(first);
    const Matrix y = x.bottomRows(n_used);

    LsFit fit;
    if (order == 0) {
        fit.sigma = y.transpose() * y / static_cast<double>(n_used);
        return fit;
    }

    Matrix z(n_used, k * p);
    for (Eigen::Index lag = 1; lag <= p; ++lag) {
        z.middleCols((lag - 1) * k, k) =
            x.middleRows(static_cast<Eigen::Index>(first) - lag, n_used);
    }

    Eigen::ColPivHouseholderQR<Matrix> qr(z);
    qr.setThreshold(kRankThreshold);
    if (qr.rank() < z.cols()) {
        const auto col = qr.colsPermutation().indices()(z.cols() - 1);
        std::ostringstream msg;
        msg << "rank-deficient regressor matrix (rank " << qr.rank() << " of " << z.cols()
            << "): channel " << (col % k) + 1 << " at lag " << (col / k) + 1
            << " is linearly dependent on the other regressors";
        throw Error(ErrorKind::Estimation, msg.str());
    }
    const Matrix b = qr.solve(y);  // (K p) x K, b^T = [A(1) ... A(p)]
    const Matrix resid = y - z * b;
    fit.sigma = resid.transpose() * resid / static_cast<double>(n_used);
    fit.sigma = 0.5 * (fit.sigma + fit.sigma.transpose());
    fit.coeffs.reserve(order);
    for (Eigen::Index lag = 0; lag < p; ++lag) {
        fit.coeffs.emplace_back(b.middleRows(lag * k, k).transpose());
    }
    return fit;
}

Matrix demeaned(const TimeSeriesData& data) {
    const Matrix& v = data.values();
    return v.rowwise() - v.colwise().mean();
}

void require_samples(const TimeSeriesData& data, std::size_t order) {
    const std::size_t k = data.channels();
    if (data.samples() <= k * order + 1) {
        std::ostringstream msg;
        msg << "order " << order << " needs more than " << k * order + 1 << " samples, got "
            << data.samples();
        throw Error(ErrorKind::Domain, msg.str());
    }
}

}  // namespace

VarModel::VarModel(Matrix sigma) : VarModel(std::vector<Matrix>{}, std::move(sigma)) {}

VarModel::VarModel(std::vector<Matrix> coeffs, Matrix sigma)
    : coeffs_(std::move(coeffs)), sigma_(std::move(sigma)) {
    check_sigma(sigma_);
    for (std::size_t l = 0; l < coeffs_.size(); ++l) {
        const Matrix& a = coeffs_[l];
        if (a.rows() != sigma_.rows() || a.cols() != sigma_.cols()) {
            std::ostringstream msg;
            msg << "A(" << l + 1 << ") is " << a.rows() << "x" << a.cols() << " but K = "
                << sigma_.rows();
            throw Error(ErrorKind::Structure, msg.str());
        }
        if (!a.allFinite()) {
            std::ostringstream msg;
            msg << "A(" << l + 1 << ") contains non-finite entries";
            throw Error(ErrorKind::Data, msg.str());
        }
    }
}

Matrix VarModel::companion() const {
    const auto k = static_cast<Eigen::Index>(channels());
    const auto p = static_cast<Eigen::Index>(order());
    Matrix c = Matrix::Zero(k * p, k * p);
    for (Eigen::Index l = 0; l < p; ++l) {
        c.block(0, l * k, k, k) = coeffs_[static_cast<std::size_t>(l)];
    }
    if (p > 1) {
        c.bottomLeftCorner(k * (p - 1), k * (p - 1)).setIdentity();
    }
    return c;
}

ValidationReport validate(const VarModel& model) {
    ValidationReport report;
    const Matrix c = model.companion();
    if (c.size() > 0) {
        Eigen::EigenSolver<Matrix> eig(c, false);
        report.spectral_radius = eig.eigenvalues().cwiseAbs().maxCoeff();
    }
    report.stable = report.spectral_radius < 1.0 - kStabilityTolerance;
    Eigen::LLT<Matrix> llt(model.sigma());
    report.sigma_ok = llt.info() == Eigen::Success;
    return report;
}

TimeSeriesData::TimeSeriesData(Matrix values, std::optional<double> sample_rate_hz)
    : values_(std::move(values)), sample_rate_hz_(sample_rate_hz) {
    if (values_.rows() < 1 || values_.cols() < 1) {
        throw Error(ErrorKind::Structure, "time series needs at least one sample and one channel");
    }
    if (sample_rate_hz_ && !(*sample_rate_hz_ > 0.0 && std::isfinite(*sample_rate_hz_))) {
        throw Error(ErrorKind::Domain, "sample rate must be positive and finite");
    }
    for (Eigen::Index r = 0; r < values_.rows(); ++r) {
        for (Eigen::Index c = 0; c < values_.cols(); ++c) {
            if (!std::isfinite(values_(r, c))) {
                std::ostringstream msg;
                msg << "non-finite value at sample " << r + 1 << ", channel " << c + 1;
                throw Error(ErrorKind::Data, msg.str());
            }
        }
    }
}

Simulation simulate(const VarModel& model, std::size_t n_samples, std::size_t burn_in,
                    std::uint64_t seed) {
    if (n_samples < 1) {
        throw Error(ErrorKind::Domain, "simulate needs n_samples >= 1");
    }
    const ValidationReport report = validate(model);
    if (!report.stable) {
        std::ostringstream msg;
        msg << "refusing to simulate unstable model (spectral radius " << report.spectral_radius
            << ")";
        throw Error(ErrorKind::Unstable, msg.str());
    }
    Eigen::LLT<Matrix> llt(model.sigma());
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorKind::Numerical, "innovation covariance is not positive definite");
    }
    const Matrix chol = llt.matrixL();

    const auto k = static_cast<Eigen::Index>(model.channels());
    const std::size_t p = model.order();
    const std::size_t total = burn_in + n_samples;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    Matrix x = Matrix::Zero(static_cast<Eigen::Index>(total), k);
    Matrix w(static_cast<Eigen::Index>(total), k);
    Vector z(k);
    for (std::size_t n = 0; n < total; ++n) {
        for (Eigen::Index c = 0; c < k; ++c) z(c) = normal(rng);
        const auto row = static_cast<Eigen::Index>(n);
        w.row(row) = (chol * z).transpose();
        Vector xn = w.row(row).transpose();
        for (std::size_t l = 1; l <= p && l <= n; ++l) {
            xn += model.coeff(l) * x.row(static_cast<Eigen::Index>(n - l)).transpose();
        }
        x.row(row) = xn.transpose();
    }

    const auto keep = static_cast<Eigen::Index>(n_samples);
    return Simulation{TimeSeriesData(x.bottomRows(keep)), TimeSeriesData(w.bottomRows(keep))};
}

VarModel rescale(const VarModel& model, std::span<const double> gains) {
    const std::size_t k = model.channels();
    if (gains.size() != k) {
        std::ostringstream msg;
        msg << "expected " << k << " gains, got " << gains.size();
        throw Error(ErrorKind::Structure, msg.str());
    }
    Vector g(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i) {
        if (!(gains[i] > 0.0) || !std::isfinite(gains[i])) {
            std::ostringstream msg;
            msg << "gain " << i + 1 << " must be positive and finite, got " << gains[i];
            throw Error(ErrorKind::Domain, msg.str());
        }
        g(static_cast<Eigen::Index>(i)) = gains[i];
    }
    const auto d = g.asDiagonal();
    const auto d_inv = g.cwiseInverse().asDiagonal();
    std::vector<Matrix> coeffs;
    coeffs.reserve(model.order());
    for (const Matrix& a : model.coeffs()) coeffs.emplace_back(d * a * d_inv);
    return VarModel(std::move(coeffs), d * model.sigma() * d);
}

VarModel estimate(const TimeSeriesData& data, std::size_t order) {
    require_samples(data, order);
    LsFit fit = fit_least_squares(demeaned(data), order, order);
    return VarModel(std::move(fit.coeffs), std::move(fit.sigma));
}

OrderSelection select_order(const TimeSeriesData& data, std::size_t p_max,
                            OrderCriterion criterion) {
    if (p_max < 1) {
        throw Error(ErrorKind::Domain, "p_max must be at least 1");
    }
    require_samples(data, p_max);
    const Matrix x = demeaned(data);
    const double k = static_cast<double>(data.channels());
    const double t = static_cast<double>(data.samples() - p_max);
    const double penalty = criterion == OrderCriterion::AIC ? 2.0 : std::log(t);

    OrderSelection sel;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t p = 1; p <= p_max; ++p) {
        const LsFit fit = fit_least_squares(x, p, p_max);
        Eigen::LDLT<Matrix> ldlt(fit.sigma);
        const double logdet = ldlt.vectorD().array().log().sum();
        const double score = logdet + penalty * static_cast<double>(p) * k * k / t;
        sel.scores.push_back(score);
        if (score < best) {
            best = score;
            sel.order = p;
        }
    }
    return sel;
}

}  // namespace iconn
