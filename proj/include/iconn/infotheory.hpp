#pragma once

#include <cstddef>
#include <span>
#include <string_view>

#include "iconn/measures.hpp"
#include "iconn/spectral.hpp"
#include "iconn/var_model.hpp"

namespace iconn {

/// Squared coherences in [1 - kClipEpsilon, 1] are clipped to 1 - kClipEpsilon
/// before the logarithm.
inline constexpr double kClipEpsilon = 1e-12;
/// Squared coherences above 1 + kCoherenceSlack are rejected.
inline constexpr double kCoherenceSlack = 1e-9;

/// Composite trapezoid rule for samples on a (possibly non-uniform) grid.
double trapezoid(std::span<const double> values, const FrequencyGrid& grid);

/**
 * Frequency decomposition of the Gaussian mutual information rate,
 *
 *     i(w) = -(1/4pi) log(1 - |C(w)|^2) * 2,
 *
 * with the factor 2 folding the negative half of [-pi, pi) onto [0, pi].
 * Integrating i(w) over the grid gives the MIR in nats per sample.
 */
struct InfoDensity {
    Vector values;
    std::size_t clipped = 0;
};

InfoDensity info_density(std::span<const double> coh_sq);

struct MirValue {
    double nats = 0.0;
    std::size_t clipped = 0;
};

/// MIR = -(1/4pi) * integral over [-pi, pi) of log(1 - coh_sq(w)).
MirValue mir_from_coherence(std::span<const double> coh_sq, const FrequencyGrid& grid);

enum class MirKind {
    IPDC_MIR,  // MIR(w_i, eta_j)
    IDTF_MIR,  // MIR(x_i, zeta_j)
    COH_MIR,   // MIR(x_i, x_j)
};

std::string_view mir_name(MirKind kind) noexcept;

/// values(i, j) in nats per sample; clipped(i, j) counts clipped grid points.
struct MirMatrix {
    MirKind kind;
    FrequencyGrid grid;
    Matrix values;
    Eigen::MatrixXi clipped;

    std::size_t total_clipped() const noexcept {
        return static_cast<std::size_t>(clipped.sum());
    }
};

MirMatrix mir_matrix(MirKind kind, const MeasureResult& measure);
MirMatrix mir_ipdc(const VarModel& model, const FrequencyGrid& grid);
MirMatrix mir_idtf(const VarModel& model, const FrequencyGrid& grid);
MirMatrix mir_coherence(const VarModel& model, const FrequencyGrid& grid);

struct BridgeResult {
    Vector f;  // -log(1 - s) pointwise
    std::size_t clipped = 0;
};

/// Map from a bivariate squared measure to the Geweke-Hosoya style causality
/// spectrum f(w) = -log(1 - s(w)); the inverse is s = 1 - exp(-f).
BridgeResult geweke_hosoya_bridge(std::span<const double> measure_sq);

struct SymmetryCheck {
    bool pass = false;
    double max_deviation = 0.0;
};

/// Compares the MIR integrand built from iPDC_ij with the one built from its
/// complex conjugate (zero-based i, j).
SymmetryCheck mir_symmetry_check(const VarModel& model, const FrequencyGrid& grid,
                                 std::size_t i, std::size_t j);

}  // namespace iconn
