#include "predsim/config_json.hpp"

#include <fstream>
#include <set>

namespace predsim {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::set<std::string>& allowed,
                    const std::string& context) {
    for (const auto& [key, _] : j.items())
        if (!allowed.count(key))
            throw ParseError("unknown field '" + key + "' in " + context);
}

const json& require(const json& j, const std::string& key, const std::string& context) {
    auto it = j.find(key);
    if (it == j.end())
        throw ParseError("missing field '" + key + "' in " + context);
    return *it;
}

double as_number(const json& j, const std::string& context) {
    if (!j.is_number())
        throw ParseError(context + " must be a number");
    return j.get<double>();
}

PredicateSpec predicate_from_json(const json& j, const std::string& context) {
    if (!j.is_object())
        throw ParseError(context + " must be an object");
    reject_unknown(j, {"id", "selectivity", "accuracy_mean", "accuracy_var"}, context);
    PredicateSpec p;
    const auto& id = require(j, "id", context);
    if (!id.is_string()) throw ParseError(context + ".id must be a string");
    p.id = id.get<std::string>();
    p.selectivity = as_number(require(j, "selectivity", context), context + ".selectivity");
    p.accuracy_mean =
        as_number(require(j, "accuracy_mean", context), context + ".accuracy_mean");
    // accuracy_var is optional; 0.04 models moderate worker heterogeneity.
    if (auto it = j.find("accuracy_var"); it != j.end())
        p.accuracy_var = as_number(*it, context + ".accuracy_var");
    return p;
}

GenerationMode mode_from_json(const json& j) {
    if (!j.is_object())
        throw ParseError("generation_mode must be an object");
    const auto& mode = require(j, "mode", "generation_mode");
    if (!mode.is_string())
        throw ParseError("generation_mode.mode must be a string");
    const std::string name = mode.get<std::string>();
    if (name == "selectivity") {
        reject_unknown(j, {"mode"}, "generation_mode");
        return SelectivityMode{};
    }
    if (name == "class_distribution") {
        reject_unknown(j, {"mode", "in_fraction"}, "generation_mode");
        ClassDistributionSpec dist;
        dist.in_fraction =
            as_number(require(j, "in_fraction", "generation_mode"), "generation_mode.in_fraction");
        return dist;
    }
    throw ParseError("generation_mode.mode must be 'selectivity' or 'class_distribution'");
}

TieRule tie_rule_from_json(const json& j) {
    if (!j.is_string())
        throw ParseError("tie_rule must be a string");
    const std::string name = j.get<std::string>();
    if (name == "OUT") return TieRule::Out;
    if (name == "IN") return TieRule::In;
    throw ParseError("tie_rule must be 'OUT' or 'IN'");
}

}  // namespace

SimulationConfig config_from_json(const json& j, bool require_predicates) {
    if (!j.is_object())
        throw ParseError("config must be a JSON object");
    reject_unknown(j,
                   {"complex_predicate", "item_count", "generation_mode", "budget_b",
                    "beta_weights", "trials", "seed", "tie_rule", "same_task_fresh_accuracy"},
                   "config");

    SimulationConfig config;

    if (auto it = j.find("complex_predicate"); it != j.end()) {
        const json& cp = *it;
        if (!cp.is_object())
            throw ParseError("complex_predicate must be an object");
        reject_unknown(cp, {"predicates", "penalty"}, "complex_predicate");
        const auto& preds = require(cp, "predicates", "complex_predicate");
        if (!preds.is_array())
            throw ParseError("complex_predicate.predicates must be an array");
        for (std::size_t i = 0; i < preds.size(); ++i)
            config.complex_predicate.predicates.push_back(predicate_from_json(
                preds[i], "complex_predicate.predicates[" + std::to_string(i) + "]"));
        if (auto pit = cp.find("penalty"); pit != cp.end())
            config.complex_predicate.penalty = as_number(*pit, "complex_predicate.penalty");
    } else if (require_predicates) {
        throw ParseError("missing field 'complex_predicate' in config");
    }

    const auto& count = require(j, "item_count", "config");
    if (!count.is_number_unsigned())
        throw ParseError("item_count must be a non-negative integer");
    config.item_count = count.get<std::uint64_t>();

    config.generation_mode = mode_from_json(require(j, "generation_mode", "config"));

    const auto& budget = require(j, "budget_b", "config");
    if (!budget.is_number_integer())
        throw ParseError("budget_b must be an integer");
    config.budget_b = budget.get<int>();

    if (auto it = j.find("beta_weights"); it != j.end()) {
        if (!it->is_array())
            throw ParseError("beta_weights must be an array");
        for (std::size_t i = 0; i < it->size(); ++i)
            config.beta_weights.push_back(
                as_number((*it)[i], "beta_weights[" + std::to_string(i) + "]"));
    } else if (require_predicates) {
        throw ParseError("missing field 'beta_weights' in config");
    }

    const auto& trials = require(j, "trials", "config");
    if (!trials.is_number_integer())
        throw ParseError("trials must be an integer");
    config.trials = trials.get<int>();

    if (auto it = j.find("seed"); it != j.end()) {
        if (!it->is_number_unsigned())
            throw ParseError("seed must be a non-negative integer");
        config.seed = it->get<std::uint64_t>();
    }
    if (auto it = j.find("tie_rule"); it != j.end())
        config.tie_rule = tie_rule_from_json(*it);
    if (auto it = j.find("same_task_fresh_accuracy"); it != j.end()) {
        if (!it->is_boolean())
            throw ParseError("same_task_fresh_accuracy must be a boolean");
        config.same_task_fresh_accuracy = it->get<bool>();
    }

    return config;
}

nlohmann::json config_to_json(const SimulationConfig& config) {
    json preds = json::array();
    for (const auto& p : config.complex_predicate.predicates)
        preds.push_back({{"id", p.id},
                         {"selectivity", p.selectivity},
                         {"accuracy_mean", p.accuracy_mean},
                         {"accuracy_var", p.accuracy_var}});
    json mode;
    if (std::holds_alternative<SelectivityMode>(config.generation_mode)) {
        mode = {{"mode", "selectivity"}};
    } else {
        mode = {{"mode", "class_distribution"},
                {"in_fraction", std::get<ClassDistributionSpec>(config.generation_mode).in_fraction}};
    }
    return json{
        {"complex_predicate",
         {{"predicates", preds}, {"penalty", config.complex_predicate.penalty}}},
        {"item_count", config.item_count},
        {"generation_mode", mode},
        {"budget_b", config.budget_b},
        {"beta_weights", config.beta_weights},
        {"trials", config.trials},
        {"seed", config.seed},
        {"tie_rule", config.tie_rule == TieRule::Out ? "OUT" : "IN"},
        {"same_task_fresh_accuracy", config.same_task_fresh_accuracy},
    };
}

SimulationConfig load_config(const std::filesystem::path& path, bool require_predicates) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config file: " + path.string());
    json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid JSON in ") + path.string() + ": " + e.what());
    }
    return config_from_json(j, require_predicates);
}

}  // namespace predsim
