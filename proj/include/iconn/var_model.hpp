#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace iconn {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Spectral radius below 1 - kStabilityTolerance counts as stable.
inline constexpr double kStabilityTolerance = 1e-8;
inline constexpr std::size_t kDefaultBurnIn = 1000;

/**
 * Finite-order vector autoregressive model
 *
 *     x(n) = sum_{l=1..p} A(l) x(n-l) + w(n),   E[w w^T] = sigma.
 *
 * Immutable after construction. The constructor checks shapes, finiteness
 * and symmetry of sigma; positive definiteness and stability are reported by
 * validate() so that such models can still be represented.
 */
class VarModel {
public:
    /// White-noise model (p = 0) with the given innovation covariance.
    explicit VarModel(Matrix sigma);
    VarModel(std::vector<Matrix> coeffs, Matrix sigma);

    std::size_t channels() const noexcept { return static_cast<std::size_t>(sigma_.rows()); }
    std::size_t order() const noexcept { return coeffs_.size(); }

    /// A(lag), lag in 1..order().
    const Matrix& coeff(std::size_t lag) const { return coeffs_.at(lag - 1); }
    const std::vector<Matrix>& coeffs() const noexcept { return coeffs_; }
    const Matrix& sigma() const noexcept { return sigma_; }

    /// Kp x Kp companion matrix; empty for p = 0.
    Matrix companion() const;

private:
    std::vector<Matrix> coeffs_;
    Matrix sigma_;
};

struct ValidationReport {
    bool stable = false;
    double spectral_radius = 0.0;
    bool sigma_ok = false;
};

ValidationReport validate(const VarModel& model);

/// Samples in rows, channels in columns.
class TimeSeriesData {
public:
    explicit TimeSeriesData(Matrix values, std::optional<double> sample_rate_hz = std::nullopt);

    std::size_t samples() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    std::size_t channels() const noexcept { return static_cast<std::size_t>(values_.cols()); }
    const Matrix& values() const noexcept { return values_; }
    std::optional<double> sample_rate_hz() const noexcept { return sample_rate_hz_; }

private:
    Matrix values_;
    std::optional<double> sample_rate_hz_;
};

struct Simulation {
    TimeSeriesData samples;
    TimeSeriesData innovations;
};

/// Gaussian forward recursion from a zero initial state; the first burn_in
/// samples are discarded. Deterministic for a fixed seed.
Simulation simulate(const VarModel& model, std::size_t n_samples,
                    std::size_t burn_in = kDefaultBurnIn, std::uint64_t seed = 0);

/// Model of the rescaled process x'_k = gains_k * x_k.
VarModel rescale(const VarModel& model, std::span<const double> gains);

/// Least-squares VAR fit on mean-removed data; sigma is the residual
/// covariance with denominator equal to the number of fitted samples.
VarModel estimate(const TimeSeriesData& data, std::size_t order);

enum class OrderCriterion { AIC, BIC };

struct OrderSelection {
    std::size_t order = 0;
    std::vector<double> scores;  // scores[p - 1] for p = 1..p_max
};

/// Evaluates every order on the common sample that p_max leaves available.
OrderSelection select_order(const TimeSeriesData& data, std::size_t p_max,
                            OrderCriterion criterion);

}  // namespace iconn
