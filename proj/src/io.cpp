#include "iconn/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <json.hpp>

#include "iconn/error.hpp"
#include "iconn/oracles.hpp"

namespace iconn::io {

using Json = nlohmann::ordered_json;

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::optional<double> parse_number(std::string_view field) {
    if (field.empty()) return std::nullopt;
    if (field.front() == '+') field.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc() || ptr != field.data() + field.size()) return std::nullopt;
    return value;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Io, "cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw Error(ErrorKind::Io, "failed writing '" + path + "'");
}

Json complex_json(Complex z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json matrix_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j, std::size_t rows, std::size_t cols, const char* what) {
    if (!j.is_array() || j.size() != rows) {
        std::ostringstream msg;
        msg << what << " must have " << rows << " rows";
        throw Error(ErrorKind::Structure, msg.str());
    }
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        const Json& row = j[r];
        if (!row.is_array() || row.size() != cols) {
            std::ostringstream msg;
            msg << what << " row " << r << " must have " << cols << " entries";
            throw Error(ErrorKind::Structure, msg.str());
        }
        for (std::size_t c = 0; c < cols; ++c) {
            if (!row[c].is_number()) {
                std::ostringstream msg;
                msg << what << "[" << r << "][" << c << "] is not a number";
                throw Error(ErrorKind::Parse, msg.str());
            }
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row[c].get<double>();
        }
    }
    return m;
}

std::size_t count_field(const Json& doc, const char* key) {
    if (!doc.contains(key) || !doc[key].is_number_integer() || doc[key].get<long long>() < 0) {
        throw Error(ErrorKind::Parse, std::string("model field '") + key +
                                          "' must be a non-negative integer");
    }
    return doc[key].get<std::size_t>();
}

template <typename T, typename Parse>
std::vector<T> parse_list(std::string_view list, Parse parse, const char* what) {
    std::vector<T> out;
    for (std::string_view field : split_fields(list)) {
        if (field.empty()) continue;
        const auto v = parse(field);
        if (!v) {
            throw Error(ErrorKind::Config,
                        "unknown " + std::string(what) + " '" + std::string(field) + "'");
        }
        out.push_back(*v);
    }
    if (out.empty()) throw Error(ErrorKind::Config, std::string("empty ") + what + " list");
    return out;
}

}  // namespace

// ---------------------------------------------------------------- time series

std::optional<Layout> parse_layout(std::string_view name) noexcept {
    if (name == "rows_are_samples") return Layout::RowsAreSamples;
    if (name == "rows_are_channels") return Layout::RowsAreChannels;
    return std::nullopt;
}

TimeSeriesData parse_timeseries(std::istream& in, Layout layout,
                                std::optional<double> sample_rate_hz) {
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    bool first_content = true;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
        if (trim(view).empty()) continue;
        const auto fields = split_fields(view);

        std::vector<double> values;
        values.reserve(fields.size());
        std::optional<std::size_t> bad_col;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const auto v = parse_number(fields[c]);
            if (!v) {
                bad_col = c;
                break;
            }
            values.push_back(*v);
        }
        if (first_content) {
            first_content = false;
            if (bad_col) continue;  // header row
        }
        if (bad_col) {
            std::ostringstream msg;
            msg << "parse error at " << line_no << ":" << *bad_col + 1 << ": '"
                << fields[*bad_col] << "' is not a number";
            throw Error(ErrorKind::Parse, msg.str());
        }
        if (width == 0) width = values.size();
        if (values.size() != width) {
            std::ostringstream msg;
            msg << "parse error at " << line_no << ":" << values.size()
                << ": ragged row with " << values.size() << " fields, expected " << width;
            throw Error(ErrorKind::Parse, msg.str());
        }
        for (std::size_t c = 0; c < values.size(); ++c) {
            if (!std::isfinite(values[c])) {
                std::ostringstream msg;
                msg << "data error at " << line_no << ":" << c + 1 << ": non-finite value";
                throw Error(ErrorKind::Data, msg.str());
            }
        }
        rows.push_back(std::move(values));
    }
    if (rows.empty()) throw Error(ErrorKind::Parse, "no numeric rows found");

    const auto n_rows = static_cast<Eigen::Index>(rows.size());
    const auto n_cols = static_cast<Eigen::Index>(width);
    Matrix m(n_rows, n_cols);
    for (Eigen::Index r = 0; r < n_rows; ++r)
        for (Eigen::Index c = 0; c < n_cols; ++c)
            m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    if (layout == Layout::RowsAreChannels) m.transposeInPlace();
    return TimeSeriesData(std::move(m), sample_rate_hz);
}

TimeSeriesData load_timeseries(const std::string& path, Layout layout,
                               std::optional<double> sample_rate_hz) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Io, "cannot open '" + path + "' for reading");
    return parse_timeseries(in, layout, sample_rate_hz);
}

std::string format_timeseries(const TimeSeriesData& data) {
    std::string out;
    for (std::size_t c = 0; c < data.channels(); ++c) {
        if (c) out += ',';
        out += "x" + std::to_string(c + 1);
    }
    out += '\n';
    char buf[32];
    const Matrix& v = data.values();
    for (Eigen::Index r = 0; r < v.rows(); ++r) {
        for (Eigen::Index c = 0; c < v.cols(); ++c) {
            if (c) out += ',';
            const auto res = std::to_chars(buf, buf + sizeof buf, v(r, c));
            out.append(buf, res.ptr);
        }
        out += '\n';
    }
    return out;
}

void save_timeseries(const TimeSeriesData& data, const std::string& path) {
    write_file(path, format_timeseries(data));
}

// ------------------------------------------------------------- model document

std::string format_model(const ModelDocument& doc) {
    const VarModel& m = doc.model;
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["K"] = m.channels();
    j["p"] = m.order();
    Json coeffs = Json::array();
    for (const Matrix& a : m.coeffs()) coeffs.push_back(matrix_json(a));
    j["coeffs"] = std::move(coeffs);
    j["sigma"] = matrix_json(m.sigma());
    if (doc.metadata.name || doc.metadata.sample_rate_hz) {
        Json meta = Json::object();
        if (doc.metadata.name) meta["name"] = *doc.metadata.name;
        if (doc.metadata.sample_rate_hz) meta["sample_rate_hz"] = *doc.metadata.sample_rate_hz;
        j["metadata"] = std::move(meta);
    }
    return j.dump(2) + "\n";
}

ModelDocument parse_model(std::string_view json_text) {
    Json doc;
    try {
        doc = Json::parse(json_text);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorKind::Parse, std::string("model JSON: ") + e.what());
    }
    if (!doc.is_object()) throw Error(ErrorKind::Parse, "model document must be a JSON object");
    if (!doc.contains("schema_version") || doc["schema_version"] != kSchemaVersion) {
        throw Error(ErrorKind::Parse, "unsupported or missing schema_version (expected 1)");
    }
    const std::size_t k = count_field(doc, "K");
    const std::size_t p = count_field(doc, "p");
    if (k < 1) throw Error(ErrorKind::Structure, "K must be at least 1");
    if (!doc.contains("coeffs") || !doc["coeffs"].is_array() || doc["coeffs"].size() != p) {
        throw Error(ErrorKind::Structure, "coeffs must be an array of p matrices");
    }
    std::vector<Matrix> coeffs;
    coeffs.reserve(p);
    for (std::size_t l = 0; l < p; ++l) {
        coeffs.push_back(matrix_from_json(doc["coeffs"][l], k, k, "coeffs[l]"));
    }
    if (!doc.contains("sigma")) throw Error(ErrorKind::Structure, "missing sigma");
    Matrix sigma = matrix_from_json(doc["sigma"], k, k, "sigma");

    ModelMetadata meta;
    if (doc.contains("metadata")) {
        const Json& m = doc["metadata"];
        if (!m.is_object()) throw Error(ErrorKind::Parse, "metadata must be an object");
        if (m.contains("name")) {
            if (!m["name"].is_string()) throw Error(ErrorKind::Parse, "metadata.name must be a string");
            meta.name = m["name"].get<std::string>();
        }
        if (m.contains("sample_rate_hz")) {
            if (!m["sample_rate_hz"].is_number() || !(m["sample_rate_hz"].get<double>() > 0.0)) {
                throw Error(ErrorKind::Parse, "metadata.sample_rate_hz must be a positive number");
            }
            meta.sample_rate_hz = m["sample_rate_hz"].get<double>();
        }
    }
    return ModelDocument{VarModel(std::move(coeffs), std::move(sigma)), std::move(meta)};
}

ModelDocument load_model(const std::string& path) { return parse_model(read_file(path)); }

void save_model(const ModelDocument& doc, const std::string& path) {
    write_file(path, format_model(doc));
}

// ------------------------------------------------------------ result document

std::vector<MeasureKind> parse_measure_list(std::string_view list) {
    return parse_list<MeasureKind>(list, parse_measure, "measure");
}

std::vector<MirKind> parse_mir_list(std::string_view list) {
    auto parse = [](std::string_view name) -> std::optional<MirKind> {
        for (MirKind kind : {MirKind::IPDC_MIR, MirKind::IDTF_MIR, MirKind::COH_MIR}) {
            if (mir_name(kind) == name) return kind;
        }
        return std::nullopt;
    };
    return parse_list<MirKind>(list, parse, "MIR kind");
}

std::string run_pipeline(const VarModel& model, const ResultOptions& options) {
    const ValidationReport report = validate(model);
    if (!report.stable) {
        std::ostringstream msg;
        msg << "model is unstable (spectral radius " << report.spectral_radius
            << "); measures refused";
        throw Error(ErrorKind::Unstable, msg.str());
    }
    if (!report.sigma_ok) {
        throw Error(ErrorKind::Numerical, "innovation covariance is not positive definite");
    }
    const FrequencyGrid grid = FrequencyGrid::uniform(options.n_points);
    const SpectralSet spectra = evaluate_spectra(model, grid);
    const PartializationSet partial = partialize(spectra, model);
    const auto k = static_cast<Eigen::Index>(model.channels());

    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["K"] = model.channels();
    doc["n_points"] = grid.size();
    Json grid_json;
    grid_json["omega"] = grid.points();
    if (options.sample_rate_hz) {
        Json hz = Json::array();
        for (double w : grid.points()) hz.push_back(w * *options.sample_rate_hz / (2.0 * std::numbers::pi));
        grid_json["hz"] = std::move(hz);
        grid_json["sample_rate_hz"] = *options.sample_rate_hz;
    }
    doc["grid"] = std::move(grid_json);

    if (!options.measures.empty()) {
        Json measures = Json::object();
        for (MeasureKind kind : options.measures) {
            const MeasureResult r = compute_measure(kind, spectra, partial, model);
            Json values = Json::array();
            Json mag2 = Json::array();
            for (const CMatrix& m : r.values) {
                Json rows = Json::array();
                Json mrows = Json::array();
                for (Eigen::Index i = 0; i < k; ++i) {
                    Json row = Json::array();
                    Json mrow = Json::array();
                    for (Eigen::Index j = 0; j < k; ++j) {
                        row.push_back(complex_json(m(i, j)));
                        mrow.push_back(std::norm(m(i, j)));
                    }
                    rows.push_back(std::move(row));
                    mrows.push_back(std::move(mrow));
                }
                values.push_back(std::move(rows));
                mag2.push_back(std::move(mrows));
            }
            Json entry;
            entry["values"] = std::move(values);
            if (options.magnitude_squared) entry["mag2"] = std::move(mag2);
            measures[std::string(measure_name(kind))] = std::move(entry);
        }
        doc["measures"] = std::move(measures);
    }

    std::size_t total_clipped = 0;
    if (!options.mir.empty()) {
        const double scale = options.units == MirUnits::Bits ? 1.0 / std::numbers::ln2 : 1.0;
        Json mir;
        mir["units"] = options.units == MirUnits::Bits ? "bits_per_sample" : "nats_per_sample";
        Json matrices = Json::object();
        Json clipped = Json::object();
        for (MirKind kind : options.mir) {
            MeasureKind source = MeasureKind::COH;
            if (kind == MirKind::IPDC_MIR) source = MeasureKind::IPDC;
            if (kind == MirKind::IDTF_MIR) source = MeasureKind::IDTF;
            const MirMatrix m = mir_matrix(kind, compute_measure(source, spectra, partial, model));
            matrices[std::string(mir_name(kind))] = matrix_json(m.values * scale);
            Json counts = Json::array();
            for (Eigen::Index i = 0; i < k; ++i) {
                Json row = Json::array();
                for (Eigen::Index j = 0; j < k; ++j) row.push_back(m.clipped(i, j));
                counts.push_back(std::move(row));
            }
            clipped[std::string(mir_name(kind))] = std::move(counts);
            total_clipped += m.total_clipped();
        }
        mir["matrices"] = std::move(matrices);
        mir["clipped"] = std::move(clipped);
        doc["mir"] = std::move(mir);
    }
    doc["diagnostics"] = Json{{"spectral_radius", report.spectral_radius},
                              {"clipped_points", total_clipped}};
    return doc.dump(2) + "\n";
}

// -------------------------------------------------------------- verification

bool VerifyReport::all_passed() const noexcept {
    for (const VerifyCheck& c : checks) {
        if (!c.pass()) return false;
    }
    return !checks.empty();
}

namespace {

double fixture_deviation(const oracles::Fixture& fx, const FrequencyGrid& grid) {
    const SpectralSet spectra = evaluate_spectra(fx.model, grid);
    const PartializationSet partial = partialize(spectra, fx.model);
    const MeasureResult pi = ipdc(spectra, fx.model);
    const MeasureResult gamma = idtf(spectra, partial, fx.model);
    double worst = 0.0;
    for (const oracles::FixtureTable& t : fx.tables) {
        const auto i = static_cast<Eigen::Index>(t.i);
        const auto j = static_cast<Eigen::Index>(t.j);
        for (std::size_t f = 0; f < grid.size(); ++f) {
            Complex got;
            if (t.quantity == "ipdc") got = pi.values[f](i, j);
            else if (t.quantity == "idtf") got = gamma.values[f](i, j);
            else if (t.quantity == "s") got = spectra.s[f](i, j);
            else if (t.quantity == "partial") got = partial.partial_spectra[f](i);
            else if (t.quantity == "wiener") got = partial.wiener_filters[f][t.i](j);
            else throw Error(ErrorKind::Config, "unknown fixture quantity " + t.quantity);
            worst = std::max(worst, std::abs(got - t.values[f]));
        }
    }
    return worst;
}

}  // namespace

VerifyReport verify(std::uint64_t seed, std::size_t n_models, std::size_t n_points) {
    VerifyReport report{seed, n_models, n_points, {}};
    const FrequencyGrid grid = FrequencyGrid::uniform(n_points);
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick_k(2, 5);
    std::uniform_int_distribution<std::size_t> pick_p(1, 3);

    double thm1 = 0.0, thm2 = 0.0, lemma = 0.0, ortho = 0.0, transfer = 0.0;
    double ah = 0.0, ssinv = 0.0, ipdc_route = 0.0;
    for (std::size_t m = 0; m < n_models; ++m) {
        const std::size_t kc = pick_k(rng);
        const VarModel model = oracles::random_stable_model(kc, pick_p(rng), rng);
        const SpectralSet spectra = evaluate_spectra(model, grid);
        const PartializationSet partial = partialize(spectra, model);
        const MeasureResult pi = ipdc(spectra, model);
        const MeasureResult gamma = idtf(spectra, partial, model);
        const auto k = static_cast<Eigen::Index>(kc);
        const CMatrix eye = CMatrix::Identity(k, k);

        for (std::size_t f = 0; f < grid.size(); ++f) {
            ah = std::max(ah, (spectra.a_bar[f] * spectra.h_bar[f] - eye).cwiseAbs().maxCoeff());
            ssinv = std::max(ssinv, (spectra.s_inv[f] * spectra.s[f] - eye).cwiseAbs().maxCoeff());
            for (std::size_t j = 0; j < kc; ++j) {
                for (std::size_t l = 0; l < kc; ++l) {
                    if (l != j) {
                        ortho = std::max(ortho, std::abs(oracles::orthogonality_bracket(spectra, f, l, j)));
                    }
                }
            }
        }
        for (std::size_t j = 0; j < kc; ++j) {
            const Vector via_lemma = partial_spectrum_via_lemma(spectra, model, j);
            for (std::size_t f = 0; f < grid.size(); ++f) {
                const double block = partial.partial_spectra[f](static_cast<Eigen::Index>(j));
                lemma = std::max(lemma, std::abs(via_lemma(static_cast<Eigen::Index>(f)) - block));
            }
        }
        for (std::size_t i = 0; i < kc; ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            const double sigma_ii = model.sigma()(ii, ii);
            for (std::size_t j = 0; j < kc; ++j) {
                const auto jj = static_cast<Eigen::Index>(j);
                const auto rhs1 = oracles::theorem1_rhs(model, grid, i, j);
                const auto rhs2 = oracles::theorem2_rhs(model, grid, i, j);
                for (std::size_t f = 0; f < grid.size(); ++f) {
                    thm1 = std::max(thm1, std::abs(rhs1[f] - pi.values[f](ii, jj)));
                    thm2 = std::max(thm2, std::abs(rhs2[f] - gamma.values[f](ii, jj)));
                    const Complex route = spectra.a_bar[f](ii, jj) / std::sqrt(sigma_ii) *
                                          std::sqrt(partial.partial_spectra[f](jj));
                    ipdc_route = std::max(ipdc_route, std::abs(route - pi.values[f](ii, jj)));
                }
                transfer = std::max(transfer, oracles::transfer_function_identity(model, grid, i, j));
            }
        }
    }

    const double fx2 = fixture_deviation(oracles::fixture("two_var_alpha", 0.5, 0.0, grid), grid);
    const double fx3 =
        fixture_deviation(oracles::fixture("three_var_alpha_beta", 0.5, 1.0, grid), grid);

    report.checks = {
        {"ipdc_coherence_identity", thm1, 1e-10},
        {"idtf_coherence_identity", thm2, 1e-10},
        {"partial_spectrum_quadratic_form", lemma, 1e-10},
        {"ipdc_partial_spectrum_route", ipdc_route, 1e-10},
        {"partialization_orthogonality", ortho, 1e-10},
        {"transfer_function_identity", transfer, 1e-10},
        {"a_bar_h_bar_identity", ah, 1e-10},
        {"s_inv_s_identity", ssinv, 1e-10},
        {"fixture_two_var_alpha", fx2, 1e-12},
        {"fixture_three_var_alpha_beta", fx3, 1e-12},
    };
    return report;
}

std::string format_verify_report(const VerifyReport& report) {
    Json doc;
    doc["schema_version"] = kSchemaVersion;
    doc["seed"] = report.seed;
    doc["n_models"] = report.n_models;
    doc["n_points"] = report.n_points;
    Json checks = Json::array();
    for (const VerifyCheck& c : report.checks) {
        checks.push_back(Json{{"name", c.name},
                              {"max_deviation", c.max_deviation},
                              {"bound", c.bound},
                              {"pass", c.pass()}});
    }
    doc["checks"] = std::move(checks);
    doc["all_passed"] = report.all_passed();
    return doc.dump(2) + "\n";
}

}  // namespace iconn::io
