// Command-line front end over the iconn C API.
//
//   iconn simulate  --model m.json --n 20000 --seed 1 --out x.csv
//   iconn fit       --data x.csv --p-max 8 --criterion bic --out fitted.json
//   iconn measure   --model m.json --measures ipdc,idtf --nfreq 512 --out r.json
//   iconn mir       --model m.json --bits --out mir.json
//   iconn verify    --seed 7
//   iconn fixture   --name two_var_alpha --alpha 0.5 --out two_var_alpha.json
//
// Errors are reported as one line on stderr: "error: <TAG>: <message>".

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "iconn/iconn.h"

namespace {

struct ModelDeleter {
    void operator()(iconn_model* m) const { iconn_model_free(m); }
};
struct SeriesDeleter {
    void operator()(iconn_series* s) const { iconn_series_free(s); }
};
struct StringDeleter {
    void operator()(char* s) const { iconn_string_free(s); }
};
using ModelPtr = std::unique_ptr<iconn_model, ModelDeleter>;
using SeriesPtr = std::unique_ptr<iconn_series, SeriesDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

/// Carries an exit status out of a subcommand after the error line is printed.
struct Failure {
    int status;
};

[[noreturn]] void fail(int status, const std::string& tag, const std::string& message) {
    std::cerr << "error: " << tag << ": " << message << "\n";
    throw Failure{status};
}

void check(iconn_status status) {
    if (status != ICONN_OK) fail(status, iconn_last_error_tag(), iconn_last_error_message());
}

std::string resolve_output(const std::string& out, const std::string& default_name) {
    if (!out.empty()) return out;
    if (const char* dir = std::getenv("ICONN_OUTPUT_DIR"); dir && *dir) {
        return (std::filesystem::path(dir) / default_name).string();
    }
    return {};
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ICONN_ERR_INPUT, "E_IO", "cannot open '" + path + "' for writing");
    out << text;
}

// Shared options for commands that need a model.
struct ModelSource {
    std::string model_path;
    std::string fixture;
    double alpha = 0.5;
    double beta = 1.0;
    std::string data_path;
    std::string layout = "rows_are_samples";
    std::size_t order = 0;
    std::size_t p_max = 10;
    std::string criterion = "bic";

    void add_to(CLI::App& cmd, bool with_data) {
        auto* model = cmd.add_option("--model", model_path, "Model JSON document");
        auto* fx = cmd.add_option("--fixture", fixture,
                                  "Built-in model: two_var_alpha or three_var_alpha_beta");
        cmd.add_option("--alpha", alpha, "Fixture coupling x1 -> x2")->capture_default_str();
        cmd.add_option("--beta", beta, "Fixture coupling x2 -> x3")->capture_default_str();
        model->excludes(fx);
        if (with_data) {
            auto* data = cmd.add_option("--data", data_path, "CSV time series to fit first");
            data->excludes(model)->excludes(fx);
            add_fit_options(cmd);
        }
    }

    void add_fit_options(CLI::App& cmd) {
        cmd.add_option("--layout", layout, "rows_are_samples or rows_are_channels")
            ->check(CLI::IsMember({"rows_are_samples", "rows_are_channels"}))
            ->capture_default_str();
        cmd.add_option("--order", order, "Fixed model order (0 selects by criterion)");
        cmd.add_option("--p-max", p_max, "Largest order tried by selection")->capture_default_str();
        cmd.add_option("--criterion", criterion, "aic or bic")
            ->check(CLI::IsMember({"aic", "bic"}))
            ->capture_default_str();
    }

    ModelPtr fit_from_data() const {
        iconn_series* raw = nullptr;
        const auto lay = layout == "rows_are_channels" ? ICONN_ROWS_ARE_CHANNELS
                                                       : ICONN_ROWS_ARE_SAMPLES;
        check(iconn_series_load_csv(data_path.c_str(), lay, &raw));
        SeriesPtr series(raw);
        std::size_t p = order;
        if (p == 0) {
            check(iconn_select_order(series.get(), p_max,
                                     criterion == "aic" ? ICONN_AIC : ICONN_BIC, &p));
            std::cerr << "selected order " << p << " by " << criterion << "\n";
        }
        iconn_model* model = nullptr;
        check(iconn_fit(series.get(), p, &model));
        return ModelPtr(model);
    }

    ModelPtr load() const {
        iconn_model* raw = nullptr;
        if (!model_path.empty()) {
            check(iconn_model_load(model_path.c_str(), &raw));
        } else if (!fixture.empty()) {
            check(iconn_model_fixture(fixture.c_str(), alpha, beta, &raw));
        } else if (!data_path.empty()) {
            return fit_from_data();
        } else {
            fail(ICONN_ERR_INPUT, "E_CONFIG", "one of --model, --fixture or --data is required");
        }
        return ModelPtr(raw);
    }
};

void report_stability(const iconn_model* model) {
    iconn_validation v{};
    check(iconn_model_validate(model, &v));
    if (!v.stable) {
        std::cerr << "warning: fitted model is unstable (spectral radius " << v.spectral_radius
                  << "); measures will be refused\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Information-theoretic PDC/DTF connectivity for VAR models"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(iconn_version()));

    // simulate
    ModelSource sim_src;
    std::size_t sim_n = 0;
    std::size_t sim_burn = 1000;
    std::uint64_t sim_seed = 0;
    std::string sim_out;
    std::string sim_innov;
    auto* sim = app.add_subcommand("simulate", "Simulate a Gaussian VAR model to CSV");
    sim_src.add_to(*sim, false);
    sim->add_option("-n,--n", sim_n, "Number of samples")->required();
    sim->add_option("--burn-in", sim_burn, "Discarded transient samples")->capture_default_str();
    sim->add_option("--seed", sim_seed, "Random seed")->capture_default_str();
    sim->add_option("-o,--out", sim_out, "Output CSV");
    sim->add_option("--innovations", sim_innov, "Also write the innovation draws here");

    // fit
    ModelSource fit_src;
    std::string fit_out;
    double fit_fs = 0.0;
    auto* fit = app.add_subcommand("fit", "Fit a VAR model to CSV data");
    fit->add_option("--data", fit_src.data_path, "CSV time series")->required();
    fit_src.add_fit_options(*fit);
    fit->add_option("--fs", fit_fs, "Sample rate recorded in the model metadata (Hz)");
    fit->add_option("-o,--out", fit_out, "Output model JSON");

    // measure
    ModelSource meas_src;
    std::string meas_list = "coh,pdc,gpdc,ipdc,dtf,dc,idtf";
    std::string meas_mir;
    std::size_t meas_nfreq = 512;
    bool meas_mag2 = false;
    double meas_fs = 0.0;
    std::string meas_out;
    auto* meas = app.add_subcommand("measure", "Evaluate connectivity measures");
    meas_src.add_to(*meas, true);
    meas->add_option("--measures", meas_list, "Comma list from coh,pdc,gpdc,ipdc,dtf,dc,idtf")
        ->capture_default_str();
    meas->add_option("--mir", meas_mir, "Also integrate MIR for ipdc,idtf,coh");
    meas->add_option("--nfreq", meas_nfreq, "Grid points on [0, pi]")->capture_default_str();
    meas->add_flag("--mag2", meas_mag2, "Include magnitude-squared arrays");
    meas->add_option("--fs", meas_fs, "Sample rate for an extra Hz axis");
    meas->add_option("-o,--out", meas_out, "Output result JSON");

    // mir
    ModelSource mir_src;
    std::string mir_kinds = "ipdc,idtf,coh";
    std::size_t mir_nfreq = 512;
    bool mir_bits = false;
    double mir_fs = 0.0;
    std::string mir_out;
    auto* mir = app.add_subcommand("mir", "Mutual information rate matrices");
    mir_src.add_to(*mir, true);
    mir->add_option("--kinds", mir_kinds, "Comma list from ipdc,idtf,coh")->capture_default_str();
    mir->add_option("--nfreq", mir_nfreq, "Grid points on [0, pi]")->capture_default_str();
    mir->add_flag("--bits", mir_bits, "Report bits per sample instead of nats");
    mir->add_option("--fs", mir_fs, "Sample rate for an extra Hz axis");
    mir->add_option("-o,--out", mir_out, "Output result JSON");

    // verify
    std::uint64_t ver_seed = 7;
    std::size_t ver_models = 50;
    std::size_t ver_nfreq = 128;
    std::string ver_out;
    auto* ver = app.add_subcommand("verify", "Check the coherence identities with the oracles");
    ver->add_option("--seed", ver_seed, "Seed of the random model population")->capture_default_str();
    ver->add_option("--models", ver_models, "Number of random models")->capture_default_str();
    ver->add_option("--nfreq", ver_nfreq, "Grid points on [0, pi]")->capture_default_str();
    ver->add_option("-o,--out", ver_out, "Output report JSON");

    // fixture
    ModelSource fx_src;
    std::string fx_out;
    auto* fx = app.add_subcommand("fixture", "Write a built-in example model as JSON");
    fx->add_option("--name", fx_src.fixture, "two_var_alpha or three_var_alpha_beta")->required();
    fx->add_option("--alpha", fx_src.alpha, "Coupling x1 -> x2")->capture_default_str();
    fx->add_option("--beta", fx_src.beta, "Coupling x2 -> x3")->capture_default_str();
    fx->add_option("-o,--out", fx_out, "Output model JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: E_CONFIG: " << e.what() << "\n";
        return ICONN_ERR_INPUT;
    }

    try {
        if (*sim) {
            ModelPtr model = sim_src.load();
            iconn_series* samples = nullptr;
            iconn_series* innov = nullptr;
            check(iconn_simulate(model.get(), sim_n, sim_burn, sim_seed, &samples,
                                 sim_innov.empty() ? nullptr : &innov));
            SeriesPtr s(samples);
            SeriesPtr w(innov);
            std::string path = resolve_output(sim_out, "simulate.csv");
            check(iconn_series_save_csv(s.get(), path.empty() ? "/dev/stdout" : path.c_str()));
            if (w) check(iconn_series_save_csv(w.get(), sim_innov.c_str()));
        } else if (*fit) {
            ModelPtr model = fit_src.fit_from_data();
            report_stability(model.get());
            if (fit_fs > 0.0) check(iconn_model_set_sample_rate(model.get(), fit_fs));
            char* raw = nullptr;
            check(iconn_model_to_json(model.get(), &raw));
            StringPtr text(raw);
            emit(text.get(), resolve_output(fit_out, "model.json"));
        } else if (*meas || *mir) {
            const bool is_measure = static_cast<bool>(*meas);
            ModelSource& src = is_measure ? meas_src : mir_src;
            ModelPtr model = src.load();
            if (!src.data_path.empty()) report_stability(model.get());
            iconn_pipeline_options opts{};
            opts.n_points = is_measure ? meas_nfreq : mir_nfreq;
            opts.measures = is_measure ? meas_list.c_str() : nullptr;
            opts.mir = is_measure ? meas_mir.c_str() : mir_kinds.c_str();
            opts.magnitude_squared = meas_mag2 ? 1 : 0;
            opts.bits = mir_bits ? 1 : 0;
            opts.sample_rate_hz = is_measure ? meas_fs : mir_fs;
            char* raw = nullptr;
            check(iconn_run_pipeline(model.get(), &opts, &raw));
            StringPtr text(raw);
            emit(text.get(), resolve_output(is_measure ? meas_out : mir_out,
                                            is_measure ? "measure.json" : "mir.json"));
        } else if (*ver) {
            char* raw = nullptr;
            const iconn_status status = iconn_verify(ver_seed, ver_models, ver_nfreq, &raw);
            StringPtr text(raw);
            if (text) emit(text.get(), resolve_output(ver_out, "verify.json"));
            check(status);
        } else if (*fx) {
            ModelPtr model = fx_src.load();
            char* raw = nullptr;
            check(iconn_model_to_json(model.get(), &raw));
            StringPtr text(raw);
            emit(text.get(), resolve_output(fx_out, fx_src.fixture + ".json"));
        }
    } catch (const Failure& f) {
        return f.status;
    }
    return 0;
}
