#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iconn/infotheory.hpp"
#include "iconn/measures.hpp"
#include "iconn/spectral.hpp"
#include "iconn/var_model.hpp"

namespace iconn::io {

inline constexpr int kSchemaVersion = 1;

// ---------------------------------------------------------------- time series

enum class Layout { RowsAreSamples, RowsAreChannels };

std::optional<Layout> parse_layout(std::string_view name) noexcept;

/// Comma-separated numeric table. A first row containing any non-numeric
/// field is taken as a header. Errors cite "line:column" (both 1-based).
TimeSeriesData parse_timeseries(std::istream& in, Layout layout = Layout::RowsAreSamples,
                                std::optional<double> sample_rate_hz = std::nullopt);
TimeSeriesData load_timeseries(const std::string& path, Layout layout = Layout::RowsAreSamples,
                               std::optional<double> sample_rate_hz = std::nullopt);

/// Rows are samples, with a "x1,x2,..." header.
std::string format_timeseries(const TimeSeriesData& data);
void save_timeseries(const TimeSeriesData& data, const std::string& path);

// ------------------------------------------------------------- model document

struct ModelMetadata {
    std::optional<std::string> name;
    std::optional<double> sample_rate_hz;
};

struct ModelDocument {
    VarModel model;
    ModelMetadata metadata;
};

/// Canonical JSON text: schema_version, K, p, coeffs[l][i][j], sigma[i][j], metadata.
std::string format_model(const ModelDocument& doc);
ModelDocument parse_model(std::string_view json_text);
ModelDocument load_model(const std::string& path);
void save_model(const ModelDocument& doc, const std::string& path);

// ------------------------------------------------------------ result document

enum class MirUnits { Nats, Bits };

struct ResultOptions {
    std::size_t n_points = kDefaultGridPoints;
    std::vector<MeasureKind> measures;
    std::vector<MirKind> mir;
    bool magnitude_squared = false;
    MirUnits units = MirUnits::Nats;
    std::optional<double> sample_rate_hz;
};

/// Parses a comma-separated list such as "ipdc,idtf"; throws Config on unknown names.
std::vector<MeasureKind> parse_measure_list(std::string_view list);
std::vector<MirKind> parse_mir_list(std::string_view list);

/// Evaluates the requested measures and MIR matrices on a uniform grid and
/// returns the result document as JSON text. Refuses unstable models.
std::string run_pipeline(const VarModel& model, const ResultOptions& options);

// -------------------------------------------------------------- verification

struct VerifyCheck {
    std::string name;
    double max_deviation = 0.0;
    double bound = 0.0;
    bool pass() const noexcept { return max_deviation < bound; }
};

struct VerifyReport {
    std::uint64_t seed = 0;
    std::size_t n_models = 0;
    std::size_t n_points = 0;
    std::vector<VerifyCheck> checks;

    bool all_passed() const noexcept;
};

/// Runs every oracle identity on a seeded random model population (K in 2..5)
/// and on the closed-form fixtures.
VerifyReport verify(std::uint64_t seed, std::size_t n_models = 50, std::size_t n_points = 128);
std::string format_verify_report(const VerifyReport& report);

}  // namespace iconn::io
