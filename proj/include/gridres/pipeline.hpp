// File-based orchestration of the three-stage study: synthetic data
// generation, classifier selection, per-track outage prediction, and the
// curtailment solve. Each stage reads and writes files only, so stages can
// be re-run in isolation; the pipeline manifest records seeds and input
// hashes for reproducibility.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gridres/curtailment.hpp"
#include "gridres/dataset.hpp"
#include "gridres/extensions.hpp"
#include "gridres/hazard.hpp"
#include "gridres/matpower.hpp"
#include "gridres/svm.hpp"
#include "gridres/svm_report.hpp"
#include "gridres/synthdata.hpp"

namespace gridres {

struct PipelineConfig {
    // inputs
    std::string case_path;
    std::string extensions_path;           // optional
    std::vector<std::string> track_paths;  // one scenario per track
    // stage artifacts (inputs or outputs depending on the command)
    std::string dataset_path = "dataset.csv";
    std::string split_path = "split.json";
    std::string model_path = "model.json";
    std::string scenarios_path = "scenarios.json";
    std::string output_dir = ".";

    std::uint64_t seed = 42;
    std::size_t n_outage = 300;
    std::size_t n_operational = 300;
    double train_fraction = 0.8;
    FragilityParams fragility;

    std::vector<std::string> kernel_names = {"linear", "quadratic", "polynomial", "gaussian"};
    std::vector<double> penalties = default_penalty_grid();

    bool emit_boundary = false;
    int boundary_resolution = 60;
    bool emit_verification = true;
    double line_sample_step_km = 1.0;
    std::vector<double> scenario_weights;  // optional, parallel to track list
};

inline void from_json(const nlohmann::json& j, PipelineConfig& c) {
    c.case_path = j.value("case", c.case_path);
    c.extensions_path = j.value("extensions", c.extensions_path);
    c.track_paths = j.value("tracks", c.track_paths);
    c.dataset_path = j.value("dataset", c.dataset_path);
    c.split_path = j.value("split", c.split_path);
    c.model_path = j.value("model", c.model_path);
    c.scenarios_path = j.value("scenarios", c.scenarios_path);
    c.output_dir = j.value("output_dir", c.output_dir);
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    c.n_outage = j.value("n_outage", c.n_outage);
    c.n_operational = j.value("n_operational", c.n_operational);
    c.train_fraction = j.value("train_fraction", c.train_fraction);
    if (j.contains("fragility")) {
        const auto& f = j.at("fragility");
        c.fragility.b0 = f.value("b0", c.fragility.b0);
        c.fragility.b1 = f.value("b1", c.fragility.b1);
        c.fragility.b2 = f.value("b2", c.fragility.b2);
    }
    c.kernel_names = j.value("kernels", c.kernel_names);
    c.penalties = j.value("cs", c.penalties);
    c.emit_boundary = j.value("emit_boundary", c.emit_boundary);
    c.boundary_resolution = j.value("boundary_resolution", c.boundary_resolution);
    c.emit_verification = j.value("emit_verification", c.emit_verification);
    c.line_sample_step_km = j.value("line_sample_step_km", c.line_sample_step_km);
    c.scenario_weights = j.value("scenario_weights", c.scenario_weights);
}

// --- small file helpers ---------------------------------------------------------

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open input file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file: " + path);
    out << content;
}

// FNV-1a 64-bit content hash for the run manifest.
inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

inline std::string out_path(const PipelineConfig& cfg, const std::string& name) {
    return (std::filesystem::path(cfg.output_dir) / name).string();
}

inline GridCase load_case_with_extensions(const PipelineConfig& cfg) {
    GridCase grid = parse_matpower_case(read_file(cfg.case_path),
                                        std::filesystem::path(cfg.case_path).filename().string());
    if (!cfg.extensions_path.empty())
        apply_extensions(grid, parse_extensions(read_file(cfg.extensions_path)));
    return grid;
}

// --- stages ----------------------------------------------------------------------

// Writes dataset.csv plus a split manifest listing train/validation row indices.
inline void run_gen_data(const PipelineConfig& cfg) {
    const Dataset ds = generate_dataset(cfg.n_outage, cfg.n_operational, cfg.seed, cfg.fragility);
    write_file(out_path(cfg, cfg.dataset_path), dataset_to_csv(ds));

    // The split is over row indices so the dataset file stays the single
    // source of sample values.
    const std::size_t m = ds.size();
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    Rng rng(cfg.seed);
    for (std::size_t i = m - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_index(i + 1));
        std::swap(order[i], order[j]);
    }
    const std::size_t n_train =
        static_cast<std::size_t>(std::floor(cfg.train_fraction * static_cast<double>(m)));
    nlohmann::json j;
    j["seed"] = cfg.seed;
    j["train_fraction"] = cfg.train_fraction;
    j["train"] = std::vector<std::size_t>(order.begin(), order.begin() + static_cast<long>(n_train));
    j["validation"] = std::vector<std::size_t>(order.begin() + static_cast<long>(n_train), order.end());
    write_file(out_path(cfg, cfg.split_path), j.dump(1) + "\n");
}

inline std::pair<Dataset, Dataset> load_split(const PipelineConfig& cfg) {
    const Dataset ds = dataset_from_csv(read_file(out_path(cfg, cfg.dataset_path)));
    const nlohmann::json j = nlohmann::json::parse(read_file(out_path(cfg, cfg.split_path)));
    Dataset train, validation;
    train.seed = validation.seed = j.value("seed", 0ull);
    for (std::size_t i : j.at("train").get<std::vector<std::size_t>>())
        train.samples.push_back(ds.samples.at(i));
    for (std::size_t i : j.at("validation").get<std::vector<std::size_t>>())
        validation.samples.push_back(ds.samples.at(i));
    if (train.samples.empty() || validation.samples.empty())
        throw ValidationError("split manifest yields an empty partition");
    return {train, validation};
}

struct TrainOutcome {
    GridSearchResult result;
    std::vector<LabeledKernel> kernels;
    std::vector<double> penalties;
};

inline TrainOutcome run_train(const PipelineConfig& cfg) {
    const auto [train_set, validation_set] = load_split(cfg);
    std::vector<LabeledKernel> kernels;
    for (const std::string& name : cfg.kernel_names) {
        const auto k = kernel_by_name(name);
        if (!k) throw ValidationError("unknown kernel '" + name + "'");
        kernels.push_back(*k);
    }
    TrainOutcome out;
    out.kernels = kernels;
    out.penalties = cfg.penalties;
    out.result = grid_search(train_set, validation_set, kernels, cfg.penalties);

    write_file(out_path(cfg, "accuracy_table.csv"),
               accuracy_table_csv(out.result, kernels, cfg.penalties));
    const ConfusionMatrix cm = confusion(out.result.best_model, validation_set);
    write_file(out_path(cfg, "confusion.csv"), confusion_to_csv(cm));

    nlohmann::json jm = out.result.best_model;
    jm["selection"] = {{"kernel", out.result.best_cell().kernel_label},
                       {"c", out.result.best_cell().c},
                       {"validation_accuracy_pct", out.result.best_cell().accuracy}};
    jm["diagnostics"] = {{"margin", out.result.best_diagnostics.margin},
                         {"mean_slack", out.result.best_diagnostics.mean_slack},
                         {"iterations", out.result.best_diagnostics.iterations},
                         {"converged", out.result.best_diagnostics.converged}};
    write_file(out_path(cfg, cfg.model_path), jm.dump(1) + "\n");

    if (cfg.emit_boundary) {
        const BoundaryGrid grid = export_boundary(out.result.best_model, 74.0, kCategory5Cap, 0.0,
                                                  kDistanceMaxKm, cfg.boundary_resolution);
        write_file(out_path(cfg, "boundary.csv"), boundary_to_csv(grid));
    }
    return out;
}

// Applies the persisted model to every component under every track and
// writes the scenario file consumed by the curtailment stage.
inline void run_predict_outages(const PipelineConfig& cfg) {
    const GridCase grid = load_case_with_extensions(cfg);
    const nlohmann::json jm = nlohmann::json::parse(read_file(out_path(cfg, cfg.model_path)));
    const SvmModel model = jm.get<SvmModel>();

    nlohmann::json out;
    out["scenarios"] = nlohmann::json::array();
    int next_id = 1;
    for (const std::string& track_path : cfg.track_paths) {
        HurricaneTrack track = nlohmann::json::parse(read_file(track_path)).get<HurricaneTrack>();
        nlohmann::json js;
        js["s"] = next_id++;
        js["name"] = track.name.empty() ? std::filesystem::path(track_path).stem().string()
                                        : track.name;
        js["lines_out"] = nlohmann::json::array();
        js["gens_out"] = nlohmann::json::array();
        js["details"] = nlohmann::json::array();
        for (const ComponentFeatures& f :
             component_features(grid, track, cfg.line_sample_step_km)) {
            const double x[2] = {f.x1, f.x2};
            const double fv = decision_value(model, std::span<const double>(x, 2));
            const bool outage = fv >= 0.0;
            js["details"].push_back({{"kind", f.kind == ComponentKind::Generator ? "generator" : "line"},
                                     {"id", f.id},
                                     {"x1_mph", f.x1},
                                     {"x2_km", f.x2},
                                     {"decision_value", fv},
                                     {"outage", outage}});
            if (outage) {
                if (f.kind == ComponentKind::Generator) js["gens_out"].push_back(f.id);
                else js["lines_out"].push_back(f.id);
            }
        }
        out["scenarios"].push_back(js);
    }
    write_file(out_path(cfg, cfg.scenarios_path), out.dump(1) + "\n");
}

struct CurtailOutcome {
    CurtailmentSolution solution;
    VerificationReport verification;
    std::vector<OutageScenario> scenarios;
};

inline CurtailOutcome run_curtail(const PipelineConfig& cfg) {
    const GridCase grid = load_case_with_extensions(cfg);
    std::vector<OutageScenario> scenarios;
    scenarios.push_back(make_base_scenario(grid));
    for (OutageScenario& sc :
         load_scenarios(read_file(out_path(cfg, cfg.scenarios_path)), grid))
        scenarios.push_back(std::move(sc));

    CurtailmentOptions opts;
    if (!cfg.scenario_weights.empty()) {
        opts.scenario_weights.push_back(1.0);  // base
        for (double w : cfg.scenario_weights) opts.scenario_weights.push_back(w);
        if (opts.scenario_weights.size() != scenarios.size())
            throw ValidationError("scenario weight count does not match scenario count");
    }

    CurtailOutcome out;
    out.scenarios = scenarios;
    out.solution = min_load_curtailment(grid, scenarios, opts);
    write_file(out_path(cfg, "curtailment.csv"), curtailment_table_csv(grid, out.solution));
    write_file(out_path(cfg, "critical_buses.csv"),
               critical_buses_csv(rank_critical_buses(grid, out.solution)));
    write_file(out_path(cfg, "solution.json"),
               solution_to_json(grid, out.solution).dump(1) + "\n");
    out.verification = verify_solution(grid, scenarios, out.solution);
    if (cfg.emit_verification)
        write_file(out_path(cfg, "verification.json"),
                   verification_to_json(out.verification).dump(1) + "\n");
    return out;
}

// Full study: every stage in sequence plus a manifest of inputs and seeds.
// current_stage, when given, always names the stage in flight so a failure
// can be attributed.
inline void run_pipeline(const PipelineConfig& cfg, std::string* current_stage = nullptr) {
    auto enter = [current_stage](const char* name) {
        if (current_stage) *current_stage = name;
    };
    nlohmann::json manifest;
    manifest["seed"] = cfg.seed;
    manifest["stages"] = nlohmann::json::array();
    auto note_stage = [&manifest](const std::string& name) { manifest["stages"].push_back(name); };
    manifest["inputs"] = nlohmann::json::object();
    auto hash_input = [&manifest](const std::string& label, const std::string& path) {
        manifest["inputs"][label] = {{"path", path}, {"fnv1a64", fnv1a_hex(read_file(path))}};
    };

    enter("gen-data");
    run_gen_data(cfg);
    note_stage("gen-data");
    enter("train");
    run_train(cfg);
    note_stage("train");
    enter("predict-outages");
    hash_input("case", cfg.case_path);
    if (!cfg.extensions_path.empty()) hash_input("extensions", cfg.extensions_path);
    for (std::size_t i = 0; i < cfg.track_paths.size(); ++i)
        hash_input("track" + std::to_string(i + 1), cfg.track_paths[i]);
    run_predict_outages(cfg);
    note_stage("predict-outages");
    enter("curtail");
    run_curtail(cfg);
    note_stage("curtail");
    enter("pipeline");

    manifest["outputs"] = nlohmann::json::array();
    for (const std::string& name :
         {cfg.dataset_path, cfg.split_path, std::string("accuracy_table.csv"),
          std::string("confusion.csv"), cfg.model_path, cfg.scenarios_path,
          std::string("curtailment.csv"), std::string("critical_buses.csv"),
          std::string("solution.json")}) {
        const std::string p = out_path(cfg, name);
        manifest["outputs"].push_back({{"file", name}, {"fnv1a64", fnv1a_hex(read_file(p))}});
    }
    write_file(out_path(cfg, "manifest.json"), manifest.dump(1) + "\n");
}

}  // namespace gridres
