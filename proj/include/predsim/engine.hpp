#pragma once

// Monte Carlo experiment orchestration: per-trial simulation of the three
// task designs, multi-threaded experiment runs, and parameter-grid sweeps.
//
// Determinism contract: trial t of design d draws every random number from a
// stream seeded with mix_seed(mix_seed(root_seed, design_tag(d)), t); sweep
// point k runs with root seed mix_seed(root_seed, k). Results are therefore a
// pure function of (config, grid, seed), independent of thread count and
// scheduling.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "predsim/ingest.hpp"
#include "predsim/types.hpp"

namespace predsim {

struct ConditionResult {
    TaskDesign design = TaskDesign::Baseline;

    // Echo of the parameter point the trial ran under.
    std::size_t n = 0;
    std::vector<double> selectivities;
    std::vector<double> mu_list;
    double sigma2 = 0.0;  // shared accuracy variance (mean over predicates)
    int budget = 0;
    double gamma = 0.0;

    int trial = 0;
    double precision = 0.0;
    double recall = 0.0;
    // One (beta, score) entry per configured beta, in configuration order.
    // Scores are NaN when undefined (no positives anywhere in the trial).
    std::vector<std::pair<double, double>> f_scores;
    std::uint64_t cost_labels = 0;
};

// Judgments and ground truth of one simulated trial, in the ingest schema.
// Item ids are prefixed with the design name so one log can hold several
// designs' independent pools. Only representable for n <= 2 (the condition
// vocabulary is baseline/p1_p2/p1/p2).
struct TrialLog {
    std::vector<JudgmentRecord> judgments;
    std::vector<GroundTruthRecord> truths;
};

std::uint64_t design_tag(TaskDesign design);

// Seed of the stream that drives (design, trial) under a root seed.
std::uint64_t trial_stream_seed(std::uint64_t root_seed, TaskDesign design, int trial);

// Runs one trial of one design: generate the item pool, sample workers, cast
// b votes per question instance, aggregate, and score against in_label.
// The config must be valid (throws ValidationFailure otherwise). When log is
// non-null the trial's votes and pool are appended to it.
ConditionResult run_condition(const SimulationConfig& config, TaskDesign design,
                              std::uint64_t trial_seed, int trial = 0,
                              TrialLog* log = nullptr);

// All trials of all designs, ordered by (design list position, trial).
// threads = 0 picks the hardware concurrency. capture_trial, when >= 0,
// fills *log with that trial's judgments and truth for every design.
std::vector<ConditionResult> run_experiment(const SimulationConfig& config,
                                            std::span<const TaskDesign> designs,
                                            unsigned threads = 0, int capture_trial = -1,
                                            TrialLog* log = nullptr);

// One parameter point of a sweep. Vectors have length n.
struct ParamPoint {
    std::size_t n = 0;
    std::vector<double> selectivities;
    std::vector<double> mus;
    double sigma2 = 0.0;
    int budget = 0;
    double gamma = 0.0;
};

// Value lists for the swept parameters. Empty lists mean "take the base
// config's value". Each s/mu entry is either shared (length 1, broadcast to
// all predicates) or per-predicate (length must equal the point's n).
struct SweepGrid {
    std::vector<std::size_t> n_values;
    std::vector<std::vector<double>> s_values;
    std::vector<std::vector<double>> mu_values;
    std::vector<double> sigma2_values;
    std::vector<int> b_values;
    std::vector<double> gamma_values;
    std::vector<double> beta_values;
};

// JSON object with optional keys n, s, mu, sigma2, b, gamma, beta; each maps
// to a scalar or an array, and s/mu array elements may themselves be arrays
// (per-predicate values). Unknown keys are rejected.
SweepGrid grid_from_json(const nlohmann::json& j);
SweepGrid load_grid(const std::string& path);

// Cartesian expansion in key order n, s, mu, sigma2, b, gamma (last varying
// fastest), with base-config values filling unswept parameters.
std::vector<ParamPoint> expand_grid(const SweepGrid& grid, const SimulationConfig& base);

// The base config with one point's parameters substituted. Predicate ids are
// p1..pn whenever the point's n differs from the base's.
SimulationConfig apply_point(const SimulationConfig& base, const ParamPoint& point,
                             std::span<const double> beta_weights);

// run_experiment per expanded point, concatenated in point order.
std::vector<ConditionResult> sweep(const SweepGrid& grid, const SimulationConfig& base,
                                   std::span<const TaskDesign> designs, unsigned threads = 0);

// Header: design,n,selectivities,mu_list,sigma2,budget,gamma,trial,precision,
// recall,beta,f_beta,cost_labels. One row per beta per trial; list columns are
// semicolon-joined; floating-point fields use shortest round-trip formatting.
void write_results_csv(std::span<const ConditionResult> results, std::ostream& out);
void write_results_csv(std::span<const ConditionResult> results, const std::string& path);

}  // namespace predsim
