#include "iconn/measures.hpp"

#include <cmath>
#include <sstream>

#include "iconn/error.hpp"

namespace iconn {

namespace {

Matrix inverse_spd(const Matrix& sigma) {
    Eigen::LLT<Matrix> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorKind::Numerical, "innovation covariance is not positive definite");
    }
    return llt.solve(Matrix::Identity(sigma.rows(), sigma.cols()));
}

void require_positive(double value, std::size_t channel, double omega, const char* what) {
    if (!(value > 0.0)) {
        std::ostringstream msg;
        msg << what << " of channel " << channel + 1 << " is not positive at w = " << omega;
        throw Error(ErrorKind::Numerical, msg.str());
    }
}

MeasureResult make_result(MeasureKind kind, const SpectralSet& spectra) {
    return MeasureResult{kind, spectra.grid, {}};
}

// Column-normalized Ā_ij scaled by r_i over sqrt(ā_j^H W ā_j).
MeasureResult column_normalized(MeasureKind kind, const SpectralSet& spectra,
                                const Matrix& weight, const Vector& row_scale) {
    MeasureResult out = make_result(kind, spectra);
    const CMatrix w = weight.cast<Complex>();
    out.values.reserve(spectra.grid.size());
    for (std::size_t f = 0; f < spectra.grid.size(); ++f) {
        const CMatrix& a = spectra.a_bar[f];
        CMatrix v(a.rows(), a.cols());
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            const double q = (a.col(j).adjoint() * w * a.col(j))(0, 0).real();
            require_positive(q, static_cast<std::size_t>(j), spectra.grid[f],
                             "column quadratic form");
            v.col(j) = row_scale.cast<Complex>().cwiseProduct(a.col(j)) / std::sqrt(q);
        }
        out.values.push_back(std::move(v));
    }
    return out;
}

// Row-normalized H̄_ij scaled by c_j over sqrt(h̄_i^H W h̄_i).
MeasureResult row_normalized(MeasureKind kind, const SpectralSet& spectra, const Matrix& weight,
                             const Vector& source_scale) {
    MeasureResult out = make_result(kind, spectra);
    const CMatrix w = weight.cast<Complex>();
    const CRowVector scale = source_scale.transpose().cast<Complex>();
    out.values.reserve(spectra.grid.size());
    for (std::size_t f = 0; f < spectra.grid.size(); ++f) {
        const CMatrix& h = spectra.h_bar[f];
        CMatrix v(h.rows(), h.cols());
        for (Eigen::Index i = 0; i < h.rows(); ++i) {
            const double q = (h.row(i) * w * h.row(i).adjoint())(0, 0).real();
            require_positive(q, static_cast<std::size_t>(i), spectra.grid[f],
                             "row quadratic form");
            v.row(i) = h.row(i).cwiseProduct(scale) / std::sqrt(q);
        }
        out.values.push_back(std::move(v));
    }
    return out;
}

}  // namespace

std::string_view measure_name(MeasureKind kind) noexcept {
    switch (kind) {
        case MeasureKind::COH: return "coh";
        case MeasureKind::PDC: return "pdc";
        case MeasureKind::GPDC: return "gpdc";
        case MeasureKind::IPDC: return "ipdc";
        case MeasureKind::DTF: return "dtf";
        case MeasureKind::DC: return "dc";
        case MeasureKind::IDTF: return "idtf";
    }
    return "?";
}

std::optional<MeasureKind> parse_measure(std::string_view name) noexcept {
    for (MeasureKind kind : kAllMeasures) {
        if (measure_name(kind) == name) return kind;
    }
    return std::nullopt;
}

Vector MeasureResult::magnitude_squared(std::size_t i, std::size_t j) const {
    Vector out(static_cast<Eigen::Index>(values.size()));
    for (std::size_t f = 0; f < values.size(); ++f) {
        out(static_cast<Eigen::Index>(f)) =
            std::norm(values[f](static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    return out;
}

MeasureResult coherence(const SpectralSet& spectra) {
    MeasureResult out = make_result(MeasureKind::COH, spectra);
    out.values.reserve(spectra.grid.size());
    for (std::size_t f = 0; f < spectra.grid.size(); ++f) {
        const CMatrix& s = spectra.s[f];
        Vector auto_spec = s.diagonal().real();
        for (Eigen::Index i = 0; i < auto_spec.size(); ++i) {
            require_positive(auto_spec(i), static_cast<std::size_t>(i), spectra.grid[f],
                             "autospectrum");
        }
        const Vector inv_root = auto_spec.cwiseSqrt().cwiseInverse();
        CMatrix c = inv_root.cast<Complex>().asDiagonal() * s * inv_root.cast<Complex>().asDiagonal();
        c.diagonal().setOnes();
        out.values.push_back(std::move(c));
    }
    return out;
}

MeasureResult ipdc(const SpectralSet& spectra, const VarModel& model) {
    const Vector d = model.sigma().diagonal();
    return column_normalized(MeasureKind::IPDC, spectra, inverse_spd(model.sigma()),
                             d.cwiseSqrt().cwiseInverse());
}

MeasureResult pdc_family(const SpectralSet& spectra, const VarModel& model, MeasureKind kind) {
    const auto k = static_cast<Eigen::Index>(model.channels());
    switch (kind) {
        case MeasureKind::PDC:
            return column_normalized(kind, spectra, Matrix::Identity(k, k), Vector::Ones(k));
        case MeasureKind::GPDC: {
            const Vector d = model.sigma().diagonal();
            if (!(d.minCoeff() > 0.0)) {
                throw Error(ErrorKind::Numerical, "innovation variances must be positive");
            }
            return column_normalized(kind, spectra, Matrix(d.cwiseInverse().asDiagonal()),
                                     d.cwiseSqrt().cwiseInverse());
        }
        default:
            throw Error(ErrorKind::Config, "pdc_family accepts only PDC or GPDC");
    }
}

MeasureResult idtf(const SpectralSet& spectra, const PartializationSet& partial,
                   const VarModel& model) {
    const Vector& rho = partial.rho;
    if (!(rho.minCoeff() > 0.0)) {
        throw Error(ErrorKind::Numerical, "partialized innovation variance is not positive");
    }
    return row_normalized(MeasureKind::IDTF, spectra, model.sigma(), rho.cwiseSqrt());
}

MeasureResult dtf_family(const SpectralSet& spectra, const VarModel& model, MeasureKind kind) {
    const auto k = static_cast<Eigen::Index>(model.channels());
    switch (kind) {
        case MeasureKind::DTF:
            return row_normalized(kind, spectra, Matrix::Identity(k, k), Vector::Ones(k));
        case MeasureKind::DC: {
            const Vector d = model.sigma().diagonal();
            if (!(d.minCoeff() > 0.0)) {
                throw Error(ErrorKind::Numerical, "innovation variances must be positive");
            }
            return row_normalized(kind, spectra, Matrix(d.asDiagonal()), d.cwiseSqrt());
        }
        default:
            throw Error(ErrorKind::Config, "dtf_family accepts only DTF or DC");
    }
}

MeasureResult compute_measure(MeasureKind kind, const SpectralSet& spectra,
                              const PartializationSet& partial, const VarModel& model) {
    switch (kind) {
        case MeasureKind::COH: return coherence(spectra);
        case MeasureKind::PDC:
        case MeasureKind::GPDC: return pdc_family(spectra, model, kind);
        case MeasureKind::IPDC: return ipdc(spectra, model);
        case MeasureKind::DTF:
        case MeasureKind::DC: return dtf_family(spectra, model, kind);
        case MeasureKind::IDTF: return idtf(spectra, partial, model);
    }
    throw Error(ErrorKind::Config, "unknown measure kind");
}

std::map<MeasureKind, MeasureResult> all_measures(const VarModel& model,
                                                  const FrequencyGrid& grid) {
    const SpectralSet spectra = evaluate_spectra(model, grid);
    const PartializationSet partial = partialize(spectra, model);
    std::map<MeasureKind, MeasureResult> out;
    for (MeasureKind kind : kAllMeasures) {
        out.emplace(kind, compute_measure(kind, spectra, partial, model));
    }
    return out;
}

}  // namespace iconn
