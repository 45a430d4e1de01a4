#include "iconn/infotheory.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "iconn/error.hpp"

namespace iconn {

namespace {

// Clamp one squared coherence into [0, 1 - eps]; returns true when clipped at the top.
bool clamp_coherence(double& c, std::size_t index) {
    if (!std::isfinite(c) || c > 1.0 + kCoherenceSlack || c < -kCoherenceSlack) {
        std::ostringstream msg;
        msg << "squared coherence " << c << " at grid point " << index << " is outside [0, 1]";
        throw Error(ErrorKind::Domain, msg.str());
    }
    if (c < 0.0) c = 0.0;
    if (c > 1.0 - kClipEpsilon) {
        c = 1.0 - kClipEpsilon;
        return true;
    }
    return false;
}

}  // namespace

double trapezoid(std::span<const double> values, const FrequencyGrid& grid) {
    if (values.size() != grid.size()) {
        throw Error(ErrorKind::Structure, "integrand and grid sizes differ");
    }
    double sum = 0.0;
    for (std::size_t k = 1; k < values.size(); ++k) {
        sum += 0.5 * (grid[k] - grid[k - 1]) * (values[k] + values[k - 1]);
    }
    return sum;
}

InfoDensity info_density(std::span<const double> coh_sq) {
    InfoDensity out;
    out.values.resize(static_cast<Eigen::Index>(coh_sq.size()));
    for (std::size_t k = 0; k < coh_sq.size(); ++k) {
        double c = coh_sq[k];
        if (clamp_coherence(c, k)) ++out.clipped;
        out.values(static_cast<Eigen::Index>(k)) =
            -2.0 * std::log1p(-c) / (4.0 * std::numbers::pi);
    }
    return out;
}

MirValue mir_from_coherence(std::span<const double> coh_sq, const FrequencyGrid& grid) {
    if (grid.size() < 2) {
        throw Error(ErrorKind::Domain, "MIR quadrature needs at least two grid points");
    }
    const InfoDensity density = info_density(coh_sq);
    const double value = trapezoid({density.values.data(), coh_sq.size()}, grid);
    return MirValue{std::max(0.0, value), density.clipped};
}

std::string_view mir_name(MirKind kind) noexcept {
    switch (kind) {
        case MirKind::IPDC_MIR: return "ipdc";
        case MirKind::IDTF_MIR: return "idtf";
        case MirKind::COH_MIR: return "coh";
    }
    return "?";
}

MirMatrix mir_matrix(MirKind kind, const MeasureResult& measure) {
    const auto k = static_cast<Eigen::Index>(measure.channels());
    MirMatrix out{kind, measure.grid, Matrix::Zero(k, k), Eigen::MatrixXi::Zero(k, k)};
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            const Vector sq = measure.magnitude_squared(static_cast<std::size_t>(i),
                                                        static_cast<std::size_t>(j));
            const MirValue m = mir_from_coherence({sq.data(), static_cast<std::size_t>(sq.size())},
                                                  measure.grid);
            out.values(i, j) = m.nats;
            out.clipped(i, j) = static_cast<int>(m.clipped);
        }
    }
    return out;
}

MirMatrix mir_ipdc(const VarModel& model, const FrequencyGrid& grid) {
    const SpectralSet spectra = evaluate_spectra(model, grid);
    return mir_matrix(MirKind::IPDC_MIR, ipdc(spectra, model));
}

MirMatrix mir_idtf(const VarModel& model, const FrequencyGrid& grid) {
    const SpectralSet spectra = evaluate_spectra(model, grid);
    return mir_matrix(MirKind::IDTF_MIR, idtf(spectra, partialize(spectra, model), model));
}

MirMatrix mir_coherence(const VarModel& model, const FrequencyGrid& grid) {
    return mir_matrix(MirKind::COH_MIR, coherence(evaluate_spectra(model, grid)));
}

BridgeResult geweke_hosoya_bridge(std::span<const double> measure_sq) {
    BridgeResult out;
    out.f.resize(static_cast<Eigen::Index>(measure_sq.size()));
    for (std::size_t k = 0; k < measure_sq.size(); ++k) {
        double s = measure_sq[k];
        if (clamp_coherence(s, k)) ++out.clipped;
        out.f(static_cast<Eigen::Index>(k)) = -std::log1p(-s);
    }
    return out;
}

SymmetryCheck mir_symmetry_check(const VarModel& model, const FrequencyGrid& grid,
                                 std::size_t i, std::size_t j) {
    const std::size_t k = model.channels();
    if (i >= k || j >= k) {
        throw Error(ErrorKind::Domain, "channel index out of range");
    }
    const MeasureResult pi = ipdc(evaluate_spectra(model, grid), model);
    std::vector<double> forward(grid.size());
    std::vector<double> conjugate(grid.size());
    for (std::size_t f = 0; f < grid.size(); ++f) {
        const Complex z = pi.values[f](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        forward[f] = std::norm(z);
        conjugate[f] = std::norm(std::conj(z));
    }
    const InfoDensity a = info_density(forward);
    const InfoDensity b = info_density(conjugate);
    SymmetryCheck out;
    out.max_deviation = (a.values - b.values).cwiseAbs().maxCoeff();
    out.pass = out.max_deviation <= 1e-15;
    return out;
}

}  // namespace iconn
