// Command-line front end: runs the hurricane-to-curtailment study end to end
// or any single stage, with JSON config files and flag overrides.
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gridres/errors.hpp"
#include "gridres/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitNumericalError = 3;

// Config file first, then flags override whatever they set.
gridres::PipelineConfig load_config(const std::string& config_path) {
    gridres::PipelineConfig cfg;
    if (!config_path.empty())
        nlohmann::json::parse(gridres::read_file(config_path)).get_to(cfg);
    return cfg;
}

void add_common_options(CLI::App* cmd, std::string& config_path) {
    cmd->add_option("--config", config_path, "JSON config file; flags override its values");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hurricane outage prediction and load-curtailment estimation"};
    app.require_subcommand(1);

    std::string config_path;
    gridres::PipelineConfig flags;  // values captured from flags, merged after config load
    bool seed_set = false, boundary_set = false;

    auto add_io_options = [&](CLI::App* cmd) {
        add_common_options(cmd, config_path);
        cmd->add_option("--output-dir", flags.output_dir, "directory for stage outputs");
        cmd->add_option_function<std::uint64_t>(
               "--seed", [&](std::uint64_t s) { flags.seed = s; seed_set = true; },
               "deterministic run seed");
    };

    CLI::App* gen = app.add_subcommand("gen-data", "generate the labeled synthetic dataset");
    add_io_options(gen);
    gen->add_option("--n-outage", flags.n_outage, "outage-class sample quota");
    gen->add_option("--n-operational", flags.n_operational, "operational-class sample quota");
    gen->add_option("--train-fraction", flags.train_fraction, "train split fraction");
    gen->add_option("--fragility-b0", flags.fragility.b0, "fragility intercept");
    gen->add_option("--fragility-b1", flags.fragility.b1, "fragility wind coefficient (per mph)");
    gen->add_option("--fragility-b2", flags.fragility.b2, "fragility distance coefficient (per km)");

    CLI::App* train = app.add_subcommand("train", "sweep kernels and penalties, persist the best model");
    add_io_options(train);
    train->add_option("--kernels", flags.kernel_names,
                      "kernels to sweep (linear quadratic polynomial gaussian)");
    train->add_option("--cs", flags.penalties, "penalty values to sweep");
    train->add_flag_function(
        "--emit-boundary", [&](std::int64_t) { flags.emit_boundary = true; boundary_set = true; },
        "export the decision-value grid");

    CLI::App* predict = app.add_subcommand("predict-outages",
                                           "classify components under each hurricane track");
    add_io_options(predict);
    predict->add_option("--case", flags.case_path, "case file");
    predict->add_option("--extensions", flags.extensions_path, "extension file");
    predict->add_option("--tracks", flags.track_paths, "track files, one scenario each");
    predict->add_option("--model", flags.model_path, "model file (within output dir)");

    CLI::App* curtail = app.add_subcommand("curtail", "solve the minimum-curtailment model");
    add_io_options(curtail);
    curtail->add_option("--case", flags.case_path, "case file");
    curtail->add_option("--extensions", flags.extensions_path, "extension file");
    curtail->add_option("--scenarios", flags.scenarios_path, "scenario file (within output dir)");

    CLI::App* pipeline = app.add_subcommand("pipeline", "run every stage in sequence");
    add_io_options(pipeline);
    pipeline->add_option("--case", flags.case_path, "case file");
    pipeline->add_option("--extensions", flags.extensions_path, "extension file");
    pipeline->add_option("--tracks", flags.track_paths, "track files");
    pipeline->add_flag_function(
        "--emit-boundary", [&](std::int64_t) { flags.emit_boundary = true; boundary_set = true; },
        "export the decision-value grid");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitInputError;
    }

    std::string stage_name = "setup";
    try {
        gridres::PipelineConfig cfg = load_config(config_path);
        // flags override config
        for (CLI::App* sub : app.get_subcommands()) {
            auto overridden = [&](const std::string& name) {
                return sub->count(name) > 0;
            };
            if (overridden("--output-dir")) cfg.output_dir = flags.output_dir;
            if (seed_set) cfg.seed = flags.seed;
            if (overridden("--n-outage")) cfg.n_outage = flags.n_outage;
            if (overridden("--n-operational")) cfg.n_operational = flags.n_operational;
            if (overridden("--train-fraction")) cfg.train_fraction = flags.train_fraction;
            if (overridden("--fragility-b0")) cfg.fragility.b0 = flags.fragility.b0;
            if (overridden("--fragility-b1")) cfg.fragility.b1 = flags.fragility.b1;
            if (overridden("--fragility-b2")) cfg.fragility.b2 = flags.fragility.b2;
            if (overridden("--kernels")) cfg.kernel_names = flags.kernel_names;
            if (overridden("--cs")) cfg.penalties = flags.penalties;
            if (boundary_set) cfg.emit_boundary = true;
            if (overridden("--case")) cfg.case_path = flags.case_path;
            if (overridden("--extensions")) cfg.extensions_path = flags.extensions_path;
            if (overridden("--tracks")) cfg.track_paths = flags.track_paths;
            if (overridden("--model")) cfg.model_path = flags.model_path;
            if (overridden("--scenarios")) cfg.scenarios_path = flags.scenarios_path;
        }

        if (app.got_subcommand(gen)) {
            stage_name = "gen-data";
            gridres::run_gen_data(cfg);
        } else if (app.got_subcommand(train)) {
            stage_name = "train";
            gridres::run_train(cfg);
        } else if (app.got_subcommand(predict)) {
            stage_name = "predict-outages";
            gridres::run_predict_outages(cfg);
        } else if (app.got_subcommand(curtail)) {
            stage_name = "curtail";
            gridres::run_curtail(cfg);
        } else if (app.got_subcommand(pipeline)) {
            std::string current = "pipeline";
            try {
                gridres::run_pipeline(cfg, &current);
            } catch (...) {
                stage_name = current;
                throw;
            }
        }
    } catch (const gridres::NumericalError& e) {
        std::fprintf(stderr, "error (stage %s): %s\n", stage_name.c_str(), e.what());
        return kExitNumericalError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error (stage %s): %s\n", stage_name.c_str(), e.what());
        return kExitInputError;
    }
    return kExitOk;
}
