#include "predsim/types.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace predsim {

const char* to_string(TaskDesign design) {
    switch (design) {
        case TaskDesign::Baseline: return "baseline";
        case TaskDesign::SameTask: return "same_task";
        case TaskDesign::SeparateTasks: return "separate_tasks";
    }
    return "unknown";
}

TaskDesign task_design_from_string(const std::string& name) {
    if (name == "baseline") return TaskDesign::Baseline;
    if (name == "same_task") return TaskDesign::SameTask;
    if (name == "separate_tasks") return TaskDesign::SeparateTasks;
    throw DomainError("unknown task design: " + name);
}

BetaParams beta_params_from_mean_var(double mean, double variance) {
    if (!(mean > 0.0 && mean < 1.0))
        throw DomainError("beta mean must lie in (0,1), got " + std::to_string(mean));
    if (!(variance > 0.0))
        throw DomainError("beta variance must be positive, got " + std::to_string(variance));
    const double bound = mean * (1.0 - mean);
    if (variance >= bound)
        throw InfeasibleVariance("variance " + std::to_string(variance) +
                                 " must be below mean*(1-mean) = " + std::to_string(bound));
    // mean = a/(a+b), variance = ab/((a+b)^2 (a+b+1))  =>  a+b = m(1-m)/v - 1
    const double concentration = bound / variance - 1.0;
    return BetaParams{mean * concentration, (1.0 - mean) * concentration};
}

std::string ValidationReport::to_string() const {
    std::ostringstream out;
    if (violations.empty()) return "config valid";
    out << "invalid config (" << violations.size() << " violation"
        << (violations.size() == 1 ? "" : "s") << "):";
    for (const auto& v : violations) out << "\n  " << v.field << ": " << v.message;
    return out.str();
}

namespace {

void check_predicate(const PredicateSpec& p, const std::string& path,
                     std::vector<Violation>& out) {
    if (!(p.selectivity >= 0.0 && p.selectivity <= 1.0))
        out.push_back({path + ".selectivity", "must lie in [0,1]"});
    if (!(p.accuracy_mean > 0.0 && p.accuracy_mean < 1.0))
        out.push_back({path + ".accuracy_mean", "must lie in (0,1)"});
    else {
        const double bound = p.accuracy_mean * (1.0 - p.accuracy_mean);
        if (!(p.accuracy_var > 0.0 && p.accuracy_var < bound))
            out.push_back({path + ".accuracy_var",
                           "must lie in (0, mean*(1-mean)) for feasible Beta moments"});
    }
}

}  // namespace

ValidationReport validate_config(const SimulationConfig& config) {
    ValidationReport report;
    auto& v = report.violations;

    const auto& cp = config.complex_predicate;
    if (cp.predicates.empty())
        v.push_back({"complex_predicate.predicates", "at least one predicate required"});
    std::set<std::string> ids;
    for (std::size_t i = 0; i < cp.predicates.size(); ++i) {
        const auto& p = cp.predicates[i];
        check_predicate(p, "complex_predicate.predicates[" + std::to_string(i) + "]", v);
        if (!ids.insert(p.id).second)
            v.push_back({"complex_predicate.predicates[" + std::to_string(i) + "].id",
                         "predicate ids must be unique, duplicate '" + p.id + "'"});
    }
    if (!(cp.penalty >= 0.0 && cp.penalty <= 1.0))
        v.push_back({"complex_predicate.penalty", "penalty must lie in [0,1]"});

    if (config.item_count < 1) v.push_back({"item_count", "must be >= 1"});
    if (config.budget_b < 1) v.push_back({"budget_b", "must be >= 1"});
    if (config.trials < 1) v.push_back({"trials", "must be >= 1"});

    if (config.beta_weights.empty())
        v.push_back({"beta_weights", "at least one beta required"});
    for (std::size_t i = 0; i < config.beta_weights.size(); ++i)
        if (!(config.beta_weights[i] > 0.0))
            v.push_back({"beta_weights[" + std::to_string(i) + "]", "beta must be > 0"});

    if (const auto* dist = std::get_if<ClassDistributionSpec>(&config.generation_mode))
        if (!(dist->in_fraction > 0.0 && dist->in_fraction < 1.0))
            v.push_back({"generation_mode.in_fraction", "must lie in (0,1)"});

    return report;
}

void ensure_valid(const SimulationConfig& config) {
    auto report = validate_config(config);
    if (!report.valid()) throw ValidationFailure(std::move(report));
}

}  // namespace predsim
