#pragma once

// Domain types shared by the simulator and the analysis pipeline.

#include <cstdint>
#include <numeric>
#include <string>
#include <variant>
#include <vector>

#include "predsim/errors.hpp"

namespace predsim {

// One simple binary predicate p_j together with the parameters that drive
// item generation (selectivity) and worker simulation (Beta accuracy moments).
struct PredicateSpec {
    std::string id;
    double selectivity = 0.5;     // P(an item satisfies this predicate)
    double accuracy_mean = 0.7;   // mu_j, in (0,1)
    double accuracy_var = 0.04;   // sigma^2_j, in (0, mu_j*(1-mu_j))
};

// The complex predicate P = p_1 AND ... AND p_n.
struct ComplexPredicateSpec {
    std::vector<PredicateSpec> predicates;
    double penalty = 0.0;  // gamma in [0,1]: composite-question difficulty

    std::size_t size() const { return predicates.size(); }

    std::vector<double> selectivities() const {
        std::vector<double> out;
        out.reserve(predicates.size());
        for (const auto& p : predicates) out.push_back(p.selectivity);
        return out;
    }
    std::vector<double> accuracy_means() const {
        std::vector<double> out;
        out.reserve(predicates.size());
        for (const auto& p : predicates) out.push_back(p.accuracy_mean);
        return out;
    }
    std::vector<double> accuracy_vars() const {
        std::vector<double> out;
        out.reserve(predicates.size());
        for (const auto& p : predicates) out.push_back(p.accuracy_var);
        return out;
    }
};

// Ground truth for one item: one bit per predicate, 1 = satisfied.
struct ItemTruth {
    std::string item_id;
    std::vector<std::uint8_t> bits;

    // An item is IN exactly when it satisfies every predicate.
    bool in_label() const {
        for (auto b : bits)
            if (!b) return false;
        return !bits.empty();
    }
};

enum class TaskDesign { Baseline, SameTask, SeparateTasks };

const char* to_string(TaskDesign design);
TaskDesign task_design_from_string(const std::string& name);

enum class TieRule { Out, In };

// Fixed-class-distribution generation: a given fraction of IN items, the OUT
// items split as evenly as possible over the 2^n - 1 exclusion bit-patterns.
struct ClassDistributionSpec {
    double in_fraction = 0.4;  // in (0,1)
};

struct SelectivityMode {};  // independent bits with P(bit_j = 1) = s_j

using GenerationMode = std::variant<SelectivityMode, ClassDistributionSpec>;

struct SimulationConfig {
    ComplexPredicateSpec complex_predicate;
    std::uint64_t item_count = 0;
    GenerationMode generation_mode = SelectivityMode{};
    int budget_b = 0;  // votes per question instance
    std::vector<double> beta_weights;
    int trials = 0;
    std::uint64_t seed = 0;
    TieRule tie_rule = TieRule::Out;
    // When set, a same-task worker redraws an accuracy for every question
    // instead of reusing one draw across all n questions.
    bool same_task_fresh_accuracy = false;
};

struct BetaParams {
    double alpha = 0.0;
    double beta = 0.0;
};

// Converts (mean, variance) to Beta shape parameters by moment matching.
// Throws DomainError when mean is outside (0,1) or variance is non-positive,
// InfeasibleVariance when variance >= mean*(1-mean).
BetaParams beta_params_from_mean_var(double mean, double variance);

struct Violation {
    std::string field;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;

    bool valid() const { return violations.empty(); }
    std::string to_string() const;
};

// Checks every invariant of every nested type. Violations are data, not
// exceptions; a valid config yields an empty report.
ValidationReport validate_config(const SimulationConfig& config);

// Thrown by consumers (engine, CLI) that require a valid config.
struct ValidationFailure : Error {
    ValidationReport report;
    explicit ValidationFailure(ValidationReport r)
        : Error(r.to_string()), report(std::move(r)) {}
};

// Throws ValidationFailure when validate_config(config) reports violations.
void ensure_valid(const SimulationConfig& config);

}  // namespace predsim
