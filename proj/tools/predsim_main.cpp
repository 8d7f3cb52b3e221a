// predsim: Monte Carlo simulator and log analyzer for multi-predicate
// crowd classification experiments.
//
//   predsim simulate --config cfg.json --seed 42 --out results.csv
//   predsim sweep --grid grid.json --config cfg.json --seed 42 --out results.csv
//   predsim analyze --judgments j.csv --truth t.csv --out report.json
//
// Exit codes: 0 success, 1 validation/usage error, 2 I/O error.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "predsim/config_json.hpp"
#include "predsim/datagen.hpp"
#include "predsim/engine.hpp"
#include "predsim/errors.hpp"
#include "predsim/ingest.hpp"
#include "predsim/types.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

const std::vector<predsim::TaskDesign> kAllDesigns = {
    predsim::TaskDesign::Baseline,
    predsim::TaskDesign::SameTask,
    predsim::TaskDesign::SeparateTasks,
};

struct SimulateArgs {
    std::string config_path;
    std::uint64_t seed = 0;
    int trials = -1;
    unsigned threads = 0;
    std::string out_path;
    std::string log_judgments;
    std::string log_truth;
    int log_trial = 0;
};

struct SweepArgs {
    std::string grid_path;
    std::string config_path;
    std::uint64_t seed = 0;
    unsigned threads = 0;
    std::string out_path;
};

struct AnalyzeArgs {
    std::string judgments_path;
    std::string truth_path;
    std::string out_path;
    double fdr_q = 0.05;
};

int run_simulate(const SimulateArgs& args) {
    predsim::SimulationConfig config = predsim::load_config(args.config_path);
    config.seed = args.seed;
    if (args.trials > 0) config.trials = args.trials;
    predsim::ensure_valid(config);

    const bool want_log = !args.log_judgments.empty() || !args.log_truth.empty();
    if (want_log && (args.log_judgments.empty() || args.log_truth.empty()))
        throw predsim::DomainError(
            "--log-judgments and --log-truth must be given together");
    if (want_log && (args.log_trial < 0 || args.log_trial >= config.trials))
        throw predsim::DomainError("--log-trial out of range");

    predsim::TrialLog log;
    const auto results =
        predsim::run_experiment(config, kAllDesigns, args.threads,
                                want_log ? args.log_trial : -1, want_log ? &log : nullptr);
    predsim::write_results_csv(results, args.out_path);
    if (want_log) {
        predsim::write_judgments_csv(log.judgments, args.log_judgments);
        predsim::ItemPool pool;
        pool.n = config.complex_predicate.size();
        pool.items.reserve(log.truths.size());
        for (auto& t : log.truths)
            pool.items.push_back({std::move(t.item_id), std::move(t.bits)});
        predsim::write_pool_csv(pool, args.log_truth);
    }
    return kExitOk;
}

int run_sweep(const SweepArgs& args) {
    predsim::SimulationConfig base = predsim::load_config(args.config_path,
                                                          /*require_predicates=*/false);
    base.seed = args.seed;
    const predsim::SweepGrid grid = predsim::load_grid(args.grid_path);
    const auto results = predsim::sweep(grid, base, kAllDesigns, args.threads);
    predsim::write_results_csv(results, args.out_path);
    return kExitOk;
}

int run_analyze(const AnalyzeArgs& args) {
    const auto judgments = predsim::parse_judgments(args.judgments_path);
    const auto truths = predsim::parse_truth(args.truth_path);
    const nlohmann::json report = predsim::analysis_report(judgments, truths, args.fdr_q);
    std::ofstream out(args.out_path, std::ios::binary);
    if (!out) throw predsim::IoError("cannot open output file: " + args.out_path);
    out << report.dump(2) << '\n';
    out.flush();
    if (!out) throw predsim::IoError("failed writing output file: " + args.out_path);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo simulator and analyzer for multi-predicate "
                 "crowd classification"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* simulate = app.add_subcommand(
        "simulate", "Run all task designs for one configuration");
    simulate->add_option("--config", sim.config_path, "Simulation config JSON")
        ->required();
    simulate->add_option("--seed", sim.seed, "Root RNG seed")->required();
    simulate->add_option("--trials", sim.trials, "Override the config's trial count");
    simulate->add_option("--threads", sim.threads,
                         "Worker thread cap (0 = hardware concurrency)");
    simulate->add_option("--out", sim.out_path, "Output CSV path")->required();
    simulate->add_option("--log-judgments", sim.log_judgments,
                         "Write one trial's votes to this CSV");
    simulate->add_option("--log-truth", sim.log_truth,
                         "Write the logged trial's ground truth to this CSV");
    simulate->add_option("--log-trial", sim.log_trial,
                         "Trial index to log (default 0)");

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "Run a parameter-grid sweep");
    sweep_cmd->add_option("--grid", sw.grid_path, "Grid JSON")->required();
    sweep_cmd->add_option("--config", sw.config_path, "Base config JSON")->required();
    sweep_cmd->add_option("--seed", sw.seed, "Root RNG seed")->required();
    sweep_cmd->add_option("--threads", sw.threads,
                          "Worker thread cap (0 = hardware concurrency)");
    sweep_cmd->add_option("--out", sw.out_path, "Output CSV path")->required();

    AnalyzeArgs an;
    auto* analyze = app.add_subcommand(
        "analyze", "Analyze a judgment log against ground truth");
    analyze->add_option("--judgments", an.judgments_path, "Judgment CSV")->required();
    analyze->add_option("--truth", an.truth_path, "Ground-truth CSV")->required();
    analyze->add_option("--out", an.out_path, "Output JSON report path")->required();
    analyze->add_option("--fdr-q", an.fdr_q, "Benjamini-Hochberg FDR level");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::ostringstream dummy;
        app.exit(e, dummy, std::cerr);
        return kExitValidation;
    }

    try {
        if (simulate->parsed()) return run_simulate(sim);
        if (sweep_cmd->parsed()) return run_sweep(sw);
        return run_analyze(an);
    } catch (const predsim::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
}
