#include "iconn/iconn.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "iconn/error.hpp"
#include "iconn/infotheory.hpp"
#include "iconn/io.hpp"
#include "iconn/measures.hpp"
#include "iconn/oracles.hpp"
#include "iconn/var_model.hpp"

struct iconn_model {
    iconn::io::ModelDocument doc;
};

struct iconn_series {
    iconn::TimeSeriesData data;
};

namespace {

thread_local std::string g_error_tag;
thread_local std::string g_error_message;

void clear_error() {
    g_error_tag.clear();
    g_error_message.clear();
}

iconn_status set_error(std::string tag, std::string message, iconn_status status) {
    g_error_tag = std::move(tag);
    g_error_message = std::move(message);
    return status;
}

template <typename Fn>
iconn_status guarded(Fn&& fn) {
    clear_error();
    try {
        return fn();
    } catch (const iconn::Error& e) {
        return set_error(std::string(iconn::error_tag(e.kind())), e.what(),
                         static_cast<iconn_status>(iconn::exit_status(e.kind())));
    } catch (const std::bad_alloc&) {
        return set_error("E_INTERNAL", "out of memory", ICONN_ERR_INTERNAL);
    } catch (const std::exception& e) {
        return set_error("E_INTERNAL", e.what(), ICONN_ERR_INTERNAL);
    } catch (...) {
        return set_error("E_INTERNAL", "unknown exception", ICONN_ERR_INTERNAL);
    }
}

void require(bool ok, const char* what) {
    if (!ok) throw iconn::Error(iconn::ErrorKind::Config, what);
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

iconn::MeasureKind to_measure(iconn_measure_kind kind) {
    switch (kind) {
        case ICONN_COH: return iconn::MeasureKind::COH;
        case ICONN_PDC: return iconn::MeasureKind::PDC;
        case ICONN_GPDC: return iconn::MeasureKind::GPDC;
        case ICONN_IPDC: return iconn::MeasureKind::IPDC;
        case ICONN_DTF: return iconn::MeasureKind::DTF;
        case ICONN_DC: return iconn::MeasureKind::DC;
        case ICONN_IDTF: return iconn::MeasureKind::IDTF;
    }
    throw iconn::Error(iconn::ErrorKind::Config, "unknown measure kind");
}

iconn::Matrix read_matrix(const double* src, std::size_t rows, std::size_t cols) {
    iconn::Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = src[r * cols + c];
    return m;
}

void require_stable(const iconn::VarModel& model) {
    const auto report = iconn::validate(model);
    if (!report.stable) {
        throw iconn::Error(iconn::ErrorKind::Unstable,
                           "model is unstable (spectral radius " +
                               std::to_string(report.spectral_radius) + ")");
    }
}

}  // namespace

extern "C" {

const char* iconn_version(void) { return "1.0.0"; }
const char* iconn_last_error_tag(void) { return g_error_tag.c_str(); }
const char* iconn_last_error_message(void) { return g_error_message.c_str(); }
void iconn_string_free(char* s) { delete[] s; }

iconn_status iconn_model_create(size_t channels, size_t order, const double* coeffs,
                                const double* sigma, iconn_model** out) {
    return guarded([&] {
        require(out != nullptr && sigma != nullptr, "null argument");
        require(order == 0 || coeffs != nullptr, "coeffs required when order > 0");
        require(channels > 0, "channels must be positive");
        std::vector<iconn::Matrix> a;
        a.reserve(order);
        for (std::size_t l = 0; l < order; ++l) {
            a.push_back(read_matrix(coeffs + l * channels * channels, channels, channels));
        }
        iconn::VarModel model(std::move(a), read_matrix(sigma, channels, channels));
        *out = new iconn_model{{std::move(model), {}}};
        return ICONN_OK;
    });
}

iconn_status iconn_model_fixture(const char* name, double alpha, double beta,
                                 iconn_model** out) {
    return guarded([&] {
        require(out != nullptr && name != nullptr, "null argument");
        const auto fx = iconn::oracles::fixture(name, alpha, beta, iconn::FrequencyGrid::uniform(2));
        *out = new iconn_model{{fx.model, {fx.name, std::nullopt}}};
        return ICONN_OK;
    });
}

iconn_status iconn_model_load(const char* path, iconn_model** out) {
    return guarded([&] {
        require(out != nullptr && path != nullptr, "null argument");
        *out = new iconn_model{iconn::io::load_model(path)};
        return ICONN_OK;
    });
}

iconn_status iconn_model_from_json(const char* json, iconn_model** out) {
    return guarded([&] {
        require(out != nullptr && json != nullptr, "null argument");
        *out = new iconn_model{iconn::io::parse_model(json)};
        return ICONN_OK;
    });
}

iconn_status iconn_model_save(const iconn_model* model, const char* path) {
    return guarded([&] {
        require(model != nullptr && path != nullptr, "null argument");
        iconn::io::save_model(model->doc, path);
        return ICONN_OK;
    });
}

iconn_status iconn_model_to_json(const iconn_model* model, char** json) {
    return guarded([&] {
        require(model != nullptr && json != nullptr, "null argument");
        *json = dup_string(iconn::io::format_model(model->doc));
        return ICONN_OK;
    });
}

size_t iconn_model_channels(const iconn_model* model) {
    return model ? model->doc.model.channels() : 0;
}

size_t iconn_model_order(const iconn_model* model) {
    return model ? model->doc.model.order() : 0;
}

iconn_status iconn_model_validate(const iconn_model* model, iconn_validation* out) {
    return guarded([&] {
        require(model != nullptr && out != nullptr, "null argument");
        const auto r = iconn::validate(model->doc.model);
        *out = iconn_validation{r.stable ? 1 : 0, r.spectral_radius, r.sigma_ok ? 1 : 0};
        return ICONN_OK;
    });
}

iconn_status iconn_model_rescale(const iconn_model* model, const double* gains, size_t n_gains,
                                 iconn_model** out) {
    return guarded([&] {
        require(model != nullptr && gains != nullptr && out != nullptr, "null argument");
        auto scaled = iconn::rescale(model->doc.model, {gains, n_gains});
        *out = new iconn_model{{std::move(scaled), model->doc.metadata}};
        return ICONN_OK;
    });
}

iconn_status iconn_model_set_sample_rate(iconn_model* model, double sample_rate_hz) {
    return guarded([&] {
        require(model != nullptr, "null argument");
        if (!(sample_rate_hz > 0.0) || !std::isfinite(sample_rate_hz)) {
            throw iconn::Error(iconn::ErrorKind::Domain, "sample rate must be positive and finite");
        }
        model->doc.metadata.sample_rate_hz = sample_rate_hz;
        return ICONN_OK;
    });
}

void iconn_model_free(iconn_model* model) { delete model; }

iconn_status iconn_series_create(size_t n_samples, size_t channels, const double* values,
                                 iconn_series** out) {
    return guarded([&] {
        require(values != nullptr && out != nullptr, "null argument");
        *out = new iconn_series{iconn::TimeSeriesData(read_matrix(values, n_samples, channels))};
        return ICONN_OK;
    });
}

iconn_status iconn_series_load_csv(const char* path, iconn_layout layout, iconn_series** out) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "null argument");
        const auto lay = layout == ICONN_ROWS_ARE_CHANNELS ? iconn::io::Layout::RowsAreChannels
                                                           : iconn::io::Layout::RowsAreSamples;
        *out = new iconn_series{iconn::io::load_timeseries(path, lay)};
        return ICONN_OK;
    });
}

iconn_status iconn_series_save_csv(const iconn_series* series, const char* path) {
    return guarded([&] {
        require(series != nullptr && path != nullptr, "null argument");
        iconn::io::save_timeseries(series->data, path);
        return ICONN_OK;
    });
}

size_t iconn_series_samples(const iconn_series* series) {
    return series ? series->data.samples() : 0;
}

size_t iconn_series_channels(const iconn_series* series) {
    return series ? series->data.channels() : 0;
}

iconn_status iconn_series_copy(const iconn_series* series, double* out, size_t len) {
    return guarded([&] {
        require(series != nullptr && out != nullptr, "null argument");
        const auto& v = series->data.values();
        require(len >= static_cast<std::size_t>(v.size()), "output buffer too small");
        for (Eigen::Index r = 0; r < v.rows(); ++r)
            for (Eigen::Index c = 0; c < v.cols(); ++c) out[r * v.cols() + c] = v(r, c);
        return ICONN_OK;
    });
}

void iconn_series_free(iconn_series* series) { delete series; }

iconn_status iconn_simulate(const iconn_model* model, size_t n_samples, size_t burn_in,
                            uint64_t seed, iconn_series** samples, iconn_series** innovations) {
    return guarded([&] {
        require(model != nullptr && samples != nullptr, "null argument");
        auto sim = iconn::simulate(model->doc.model, n_samples, burn_in, seed);
        if (innovations) *innovations = new iconn_series{std::move(sim.innovations)};
        *samples = new iconn_series{std::move(sim.samples)};
        return ICONN_OK;
    });
}

iconn_status iconn_fit(const iconn_series* series, size_t order, iconn_model** out) {
    return guarded([&] {
        require(series != nullptr && out != nullptr, "null argument");
        auto model = iconn::estimate(series->data, order);
        *out = new iconn_model{{std::move(model), {std::nullopt, series->data.sample_rate_hz()}}};
        return ICONN_OK;
    });
}

iconn_status iconn_select_order(const iconn_series* series, size_t p_max,
                                iconn_criterion criterion, size_t* order) {
    return guarded([&] {
        require(series != nullptr && order != nullptr, "null argument");
        const auto crit =
            criterion == ICONN_AIC ? iconn::OrderCriterion::AIC : iconn::OrderCriterion::BIC;
        *order = iconn::select_order(series->data, p_max, crit).order;
        return ICONN_OK;
    });
}

iconn_status iconn_measure(const iconn_model* model, iconn_measure_kind kind, size_t n_points,
                           double* out, size_t out_len) {
    return guarded([&] {
        require(model != nullptr && out != nullptr, "null argument");
        const auto& m = model->doc.model;
        require_stable(m);
        const std::size_t k = m.channels();
        require(out_len >= 2 * n_points * k * k, "output buffer too small");
        const auto grid = iconn::FrequencyGrid::uniform(n_points);
        const auto spectra = iconn::evaluate_spectra(m, grid);
        const auto partial = iconn::partialize(spectra, m);
        const auto result = iconn::compute_measure(to_measure(kind), spectra, partial, m);
        std::size_t pos = 0;
        for (const auto& v : result.values) {
            for (Eigen::Index i = 0; i < v.rows(); ++i) {
                for (Eigen::Index j = 0; j < v.cols(); ++j) {
                    out[pos++] = v(i, j).real();
                    out[pos++] = v(i, j).imag();
                }
            }
        }
        return ICONN_OK;
    });
}

iconn_status iconn_mir(const iconn_model* model, iconn_mir_kind kind, size_t n_points,
                       double* out, size_t out_len, size_t* clipped) {
    return guarded([&] {
        require(model != nullptr && out != nullptr, "null argument");
        const auto& m = model->doc.model;
        require_stable(m);
        const std::size_t k = m.channels();
        require(out_len >= k * k, "output buffer too small");
        const auto grid = iconn::FrequencyGrid::uniform(n_points);
        iconn::MirMatrix mir = [&] {
            switch (kind) {
                case ICONN_MIR_IPDC: return iconn::mir_ipdc(m, grid);
                case ICONN_MIR_IDTF: return iconn::mir_idtf(m, grid);
                case ICONN_MIR_COH: return iconn::mir_coherence(m, grid);
            }
            throw iconn::Error(iconn::ErrorKind::Config, "unknown MIR kind");
        }();
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                out[i * k + j] = mir.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        if (clipped) *clipped = mir.total_clipped();
        return ICONN_OK;
    });
}

iconn_status iconn_run_pipeline(const iconn_model* model, const iconn_pipeline_options* options,
                                char** json) {
    return guarded([&] {
        require(model != nullptr && options != nullptr && json != nullptr, "null argument");
        iconn::io::ResultOptions opts;
        if (options->n_points > 0) opts.n_points = options->n_points;
        if (options->measures && *options->measures) {
            opts.measures = iconn::io::parse_measure_list(options->measures);
        }
        if (options->mir && *options->mir) opts.mir = iconn::io::parse_mir_list(options->mir);
        opts.magnitude_squared = options->magnitude_squared != 0;
        opts.units = options->bits ? iconn::io::MirUnits::Bits : iconn::io::MirUnits::Nats;
        if (options->sample_rate_hz > 0.0) opts.sample_rate_hz = options->sample_rate_hz;
        *json = dup_string(iconn::io::run_pipeline(model->doc.model, opts));
        return ICONN_OK;
    });
}

iconn_status iconn_verify(uint64_t seed, size_t n_models, size_t n_points, char** json) {
    return guarded([&] {
        require(json != nullptr, "null argument");
        const auto report = iconn::io::verify(seed, n_models, n_points);
        *json = dup_string(iconn::io::format_verify_report(report));
        if (!report.all_passed()) {
            return set_error("E_VERIFY", "one or more identity checks exceeded their bounds",
                             ICONN_ERR_VERIFY);
        }
        return ICONN_OK;
    });
}

}  // extern "C"
