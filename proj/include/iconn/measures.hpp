#pragma once

#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "iconn/spectral.hpp"
#include "iconn/var_model.hpp"

namespace iconn {

enum class MeasureKind { COH, PDC, GPDC, IPDC, DTF, DC, IDTF };

inline constexpr MeasureKind kAllMeasures[] = {MeasureKind::COH, MeasureKind::PDC,
                                               MeasureKind::GPDC, MeasureKind::IPDC,
                                               MeasureKind::DTF,  MeasureKind::DC,
                                               MeasureKind::IDTF};

/// Lower-case CLI name: "coh", "pdc", "gpdc", "ipdc", "dtf", "dc", "idtf".
std::string_view measure_name(MeasureKind kind) noexcept;
std::optional<MeasureKind> parse_measure(std::string_view name) noexcept;

/// values[f](i, j) is the measure from source j to target i at grid point f.
/// For COH the (i, j) slot holds the coherence C_{x_i x_j}.
struct MeasureResult {
    MeasureKind kind;
    FrequencyGrid grid;
    std::vector<CMatrix> values;

    std::size_t channels() const noexcept {
        return values.empty() ? 0 : static_cast<std::size_t>(values.front().rows());
    }
    /// |values[f](i, j)|^2 across the grid.
    Vector magnitude_squared(std::size_t i, std::size_t j) const;
};

MeasureResult coherence(const SpectralSet& spectra);

/// Information PDC: Ā_ij sigma_ii^{-1/2} / sqrt(ā_j^H sigma^{-1} ā_j).
MeasureResult ipdc(const SpectralSet& spectra, const VarModel& model);

/// PDC (identity weighting) or generalized PDC (diagonal weighting) of the
/// model's own Ā.
MeasureResult pdc_family(const SpectralSet& spectra, const VarModel& model, MeasureKind kind);

/// Information DTF: H̄_ij rho_jj^{1/2} / sqrt(h̄_i^H sigma h̄_i), normalized over
/// the target row i so the denominator is S_{x_i x_i}.
MeasureResult idtf(const SpectralSet& spectra, const PartializationSet& partial,
                   const VarModel& model);

/// DTF (identity weighting) or directed coherence (diagonal weighting).
MeasureResult dtf_family(const SpectralSet& spectra, const VarModel& model, MeasureKind kind);

MeasureResult compute_measure(MeasureKind kind, const SpectralSet& spectra,
                              const PartializationSet& partial, const VarModel& model);

/// Every measure from one shared spectral evaluation.
std::map<MeasureKind, MeasureResult> all_measures(const VarModel& model,
                                                  const FrequencyGrid& grid);

}  // namespace iconn
