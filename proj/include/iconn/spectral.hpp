#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "iconn/var_model.hpp"

namespace iconn {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using CRowVector = Eigen::RowVectorXcd;

inline constexpr std::size_t kDefaultGridPoints = 512;
/// Condition number above which a per-frequency matrix counts as singular.
inline constexpr double kConditionLimit = 1e12;

/// Normalized angular frequencies on [0, pi], strictly increasing.
class FrequencyGrid {
public:
    /// n uniform points including both endpoints; n = 1 gives {0}.
    static FrequencyGrid uniform(std::size_t n_points = kDefaultGridPoints);

    /// Arbitrary points; must be strictly increasing inside [0, pi].
    explicit FrequencyGrid(std::vector<double> points);

    std::size_t size() const noexcept { return points_.size(); }
    double operator[](std::size_t k) const { return points_[k]; }
    const std::vector<double>& points() const noexcept { return points_; }

private:
    std::vector<double> points_;
};

/// Per-frequency spectral objects of a VAR model. Index [f] is grid point f.
struct SpectralSet {
    FrequencyGrid grid;
    std::vector<CMatrix> a_bar;  // I - sum_l A(l) e^{-i w l}
    std::vector<CMatrix> h_bar;  // a_bar^{-1}
    std::vector<CMatrix> s;      // h_bar sigma h_bar^H
    std::vector<CMatrix> s_inv;  // a_bar^H sigma^{-1} a_bar
};

SpectralSet evaluate_spectra(const VarModel& model, const FrequencyGrid& grid);

/// Ā(w) alone, without inversion.
CMatrix a_bar_at(const VarModel& model, double omega);

/// Partialization of each channel against all the others.
struct PartializationSet {
    /// partial_spectra[f](k): S_{eta_k eta_k} at grid point f.
    std::vector<Vector> partial_spectra;
    /// wiener_filters[f][k]: g_k(w), a row over the other channels in ascending order.
    std::vector<std::vector<CRowVector>> wiener_filters;
    /// rho(j): variance of w_j after regressing out the other innovations.
    Vector rho;
    /// Covariances of w_j with the other innovations, and their covariance block.
    std::vector<Vector> sigma_cross;
    std::vector<Matrix> sigma_rest;
};

/// Indices {0..K-1} without `k`, ascending.
std::vector<Eigen::Index> other_channels(std::size_t k_channels, std::size_t k);

PartializationSet partialize(const SpectralSet& spectra, const VarModel& model);

/// 1 / (ā_j^H sigma^{-1} ā_j) on every grid point (zero-based j).
Vector partial_spectrum_via_lemma(const SpectralSet& spectra, const VarModel& model,
                                  std::size_t j);

}  // namespace iconn
