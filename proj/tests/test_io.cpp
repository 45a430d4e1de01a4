#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <sstream>
#include <json.hpp>

#include "iconn/error.hpp"
#include "iconn/io.hpp"
#include "test_support.hpp"

using namespace iconn;
using iconn::testing::two_var;
using nlohmann::json;

namespace {

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("iconn_test_io_" + name);
}

}  // namespace

TEST_CASE("csv parsing") {
    SUBCASE("header is detected and skipped") {
        std::istringstream in("a,b\n1,2\n3,4\n5,6\n");
        const auto d = io::parse_timeseries(in);
        CHECK(d.samples() == 3);
        CHECK(d.channels() == 2);
        CHECK(d.values()(2, 1) == 6.0);
    }
    SUBCASE("no header") {
        std::istringstream in("1,2\n3,4\n");
        CHECK(io::parse_timeseries(in).samples() == 2);
    }
    SUBCASE("channels as rows are transposed") {
        std::istringstream in("1,2,3,4\n5,6,7,8\n");
        const auto d = io::parse_timeseries(in, io::Layout::RowsAreChannels, 250.0);
        CHECK(d.samples() == 4);
        CHECK(d.channels() == 2);
        CHECK(d.values()(3, 1) == 8.0);
        CHECK(d.sample_rate_hz() == 250.0);
    }
    SUBCASE("bad field cites line and column") {
        std::istringstream in("x1,x2\n1,2\n3,4\n5,6\n7,8\n9,10\n11,abc\n");
        try {
            io::parse_timeseries(in);
            FAIL("expected parse error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Parse);
            CHECK(std::string(e.what()).find("7:2") != std::string::npos);
        }
    }
    SUBCASE("ragged rows") {
        std::istringstream in("1,2\n3\n");
        CHECK_THROWS_AS(io::parse_timeseries(in), Error);
    }
    SUBCASE("non-finite values") {
        std::istringstream in("1,2\n3,nan\n");
        try {
            io::parse_timeseries(in);
            FAIL("expected data error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Data);
            CHECK(std::string(e.what()).find("2:2") != std::string::npos);
        }
    }
    SUBCASE("layout names") {
        CHECK(io::parse_layout("rows_are_channels") == io::Layout::RowsAreChannels);
        CHECK_FALSE(io::parse_layout("columns").has_value());
    }
    SUBCASE("format and parse round trip exactly") {
        const auto sim = simulate(two_var(0.5), 50, 10, 3);
        std::istringstream in(io::format_timeseries(sim.samples));
        CHECK(io::parse_timeseries(in).values() == sim.samples.values());
    }
    SUBCASE("missing file is an io error") {
        try {
            io::load_timeseries("/nonexistent/dir/x.csv");
            FAIL("expected io error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Io);
        }
    }
}

TEST_CASE("model documents") {
    SUBCASE("byte-identical round trip") {
        for (const VarModel& m : iconn::testing::random_population(6, 12)) {
            io::ModelDocument doc{m, {std::string("random"), 128.0}};
            const std::string text = io::format_model(doc);
            CHECK(io::format_model(io::parse_model(text)) == text);
        }
    }
    SUBCASE("file round trip") {
        const auto path = temp_path("model.json").string();
        const io::ModelDocument doc{two_var(0.5), {}};
        io::save_model(doc, path);
        const auto back = io::load_model(path);
        CHECK(back.model.coeff(1) == doc.model.coeff(1));
        CHECK_FALSE(back.metadata.name.has_value());
        std::filesystem::remove(path);
    }
    SUBCASE("layout of the document") {
        const json j = json::parse(io::format_model({two_var(0.5), {}}));
        CHECK(j["schema_version"] == 1);
        CHECK(j["K"] == 2);
        CHECK(j["p"] == 1);
        CHECK(j["coeffs"][0][1][0] == 0.5);
        CHECK(j["sigma"][1][1] == 1.0);
    }
    SUBCASE("malformed documents") {
        CHECK_THROWS_AS(io::parse_model("{"), Error);
        CHECK_THROWS_AS(io::parse_model("[]"), Error);
        CHECK_THROWS_AS(io::parse_model(R"({"schema_version":2,"K":1,"p":0,"coeffs":[],"sigma":[[1]]})"),
                        Error);
        CHECK_THROWS_AS(io::parse_model(R"({"schema_version":1,"K":2,"p":1,"coeffs":[[[0,0],[0,0]]],"sigma":[[1,0],[0]]})"),
                        Error);
        CHECK_NOTHROW(io::parse_model(R"({"schema_version":1,"K":1,"p":0,"coeffs":[],"sigma":[[2]]})"));
    }
}

TEST_CASE("measure and mir lists") {
    CHECK(io::parse_measure_list("ipdc,idtf").size() == 2);
    CHECK(io::parse_mir_list("ipdc,coh").size() == 2);
    try {
        io::parse_measure_list("ipdc,foo");
        FAIL("expected config error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Config);
        CHECK(std::string(e.what()).find("foo") != std::string::npos);
    }
    CHECK_THROWS_AS(io::parse_mir_list(""), Error);
}

TEST_CASE("pipeline") {
    io::ResultOptions opts;
    opts.n_points = 8;
    opts.measures = {MeasureKind::IPDC};
    opts.magnitude_squared = true;
    SUBCASE("iPDC squared magnitude on the two-variable example") {
        const json r = json::parse(io::run_pipeline(two_var(0.5), opts));
        CHECK(r["n_points"] == 8);
        CHECK(r["grid"]["omega"].size() == 8);
        const auto& mag2 = r["measures"]["ipdc"]["mag2"];
        CHECK(mag2.size() == 8);
        for (std::size_t f = 0; f < 8; ++f) {
            CHECK(std::abs(mag2[f][1][0].get<double>() - 0.2) < 1e-12);
            CHECK(mag2[f][0][1].get<double>() == 0.0);
        }
        CHECK(r["measures"]["ipdc"]["values"][0][1][0]["re"].get<double>() ==
              doctest::Approx(-0.5 / std::sqrt(1.25)));
    }
    SUBCASE("deterministic text") {
        opts.mir = {MirKind::IPDC_MIR, MirKind::COH_MIR};
        CHECK(io::run_pipeline(two_var(0.5), opts) == io::run_pipeline(two_var(0.5), opts));
    }
    SUBCASE("MIR in bits and the Hz axis") {
        opts.n_points = 64;
        opts.mir = {MirKind::IPDC_MIR};
        opts.units = io::MirUnits::Bits;
        opts.sample_rate_hz = 100.0;
        const json r = json::parse(io::run_pipeline(two_var(0.5), opts));
        CHECK(r["mir"]["units"] == "bits_per_sample");
        CHECK(r["mir"]["matrices"]["ipdc"][1][0].get<double>() ==
              doctest::Approx(0.11157177565710488 / std::log(2.0)).epsilon(1e-10));
        CHECK(r["grid"]["hz"].back().get<double>() == doctest::Approx(50.0));
    }
    SUBCASE("unstable model refused") {
        Matrix a(1, 1);
        a << 1.5;
        try {
            io::run_pipeline(VarModel({a}, Matrix::Identity(1, 1)), opts);
            FAIL("expected refusal");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Unstable);
        }
    }
}

TEST_CASE("verification report") {
    const auto report = io::verify(7, 6, 32);
    CHECK(report.all_passed());
    CHECK(report.n_models == 6);
    for (const auto& c : report.checks) CHECK(c.max_deviation < 1e-10);
    const json j = json::parse(io::format_verify_report(report));
    CHECK(j["seed"] == 7);
}
