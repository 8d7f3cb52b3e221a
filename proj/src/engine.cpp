#include "predsim/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "predsim/aggregation.hpp"
#include "predsim/datagen.hpp"
#include "predsim/metrics.hpp"
#include "predsim/rng.hpp"
#include "predsim/worker.hpp"
#include "text_util.hpp"

namespace predsim {

namespace {

constexpr std::uint64_t kPoolTag = 0x706f6f6c;   // "pool"
constexpr std::uint64_t kVotesTag = 0x766f7465;  // "vote"

double mean_of(std::span<const double> xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

ItemPool make_pool(const SimulationConfig& config, std::uint64_t pool_seed) {
    if (std::holds_alternative<SelectivityMode>(config.generation_mode))
        return generate_items_selectivity(config.complex_predicate, config.item_count,
                                          pool_seed);
    const auto& dist = std::get<ClassDistributionSpec>(config.generation_mode);
    return generate_items_class_distribution(config.complex_predicate, dist,
                                             config.item_count, pool_seed);
}

std::uint64_t cost_for(TaskDesign design, std::uint64_t items, std::size_t n,
                       std::uint64_t b) {
    switch (design) {
        case TaskDesign::Baseline: return items * b;
        case TaskDesign::SameTask: return items * n * b;
        case TaskDesign::SeparateTasks: return items * n * b;
    }
    return 0;
}

Condition separate_condition(std::size_t predicate_index) {
    return predicate_index == 0 ? Condition::P1 : Condition::P2;
}

// Log rows use design-prefixed item ids so several designs' independent
// pools coexist in one file.
std::string log_item_id(TaskDesign design, const std::string& item_id) {
    return std::string(to_string(design)) + "_" + item_id;
}

void append_truths(TrialLog& log, TaskDesign design, const ItemPool& pool) {
    for (const auto& item : pool.items)
        log.truths.push_back({log_item_id(design, item.item_id), item.bits});
}

}  // namespace

std::uint64_t design_tag(TaskDesign design) {
    return static_cast<std::uint64_t>(design);
}

std::uint64_t trial_stream_seed(std::uint64_t root_seed, TaskDesign design, int trial) {
    return mix_seed(mix_seed(root_seed, design_tag(design)),
                    static_cast<std::uint64_t>(trial));
}

ConditionResult run_condition(const SimulationConfig& config, TaskDesign design,
                              std::uint64_t trial_seed, int trial, TrialLog* log) {
    ensure_valid(config);
    const auto& cp = config.complex_predicate;
    const std::size_t n = cp.size();
    if (log && n > 2)
        throw DomainError("judgment log export supports at most 2 predicates");

    const auto mus = cp.accuracy_means();
    const auto vars = cp.accuracy_vars();
    const double shared_var = mean_of(vars);
    const std::uint64_t b = static_cast<std::uint64_t>(config.budget_b);

    ItemPool pool = make_pool(config, mix_seed(trial_seed, kPoolTag));
    RngStream rng = make_stream(mix_seed(trial_seed, kVotesTag));

    if (log) append_truths(*log, design, pool);

    std::vector<int> decisions;
    std::vector<int> truths;
    decisions.reserve(pool.items.size());
    truths.reserve(pool.items.size());

    auto log_vote = [&](Condition condition, const std::string& item_id,
                        std::size_t worker_slot, const std::string& predicate_id,
                        int answer) {
        if (!log) return;
        JudgmentRecord rec;
        rec.worker_id = std::string("w_") + to_string(design) + "_" + item_id + "_" +
                        std::to_string(worker_slot);
        rec.item_id = log_item_id(design, item_id);
        rec.condition = condition;
        rec.predicate_id = predicate_id;
        rec.answer = answer;
        log->judgments.push_back(std::move(rec));
    };

    switch (design) {
        case TaskDesign::Baseline: {
            const double mu_b = baseline_mean(mus, cp.penalty);
            const auto bp = beta_params_from_mean_var(mu_b, shared_var);
            std::vector<int> votes(b);
            for (const auto& item : pool.items) {
                const int truth = item.in_label() ? 1 : 0;
                for (std::uint64_t w = 0; w < b; ++w) {
                    const double acc = sample_worker_accuracy(bp.alpha, bp.beta, rng);
                    votes[w] = cast_vote(truth, acc, rng);
                    log_vote(Condition::Baseline, item.item_id, w, kComplexQuestion,
                             votes[w]);
                }
                decisions.push_back(majority_vote(votes, config.tie_rule));
                truths.push_back(truth);
            }
            break;
        }
        case TaskDesign::SameTask: {
            const double mu_s = same_task_mean(mus);
            const auto bp = beta_params_from_mean_var(mu_s, shared_var);
            std::vector<std::vector<int>> votes(n, std::vector<int>(b));
            for (const auto& item : pool.items) {
                for (std::uint64_t w = 0; w < b; ++w) {
                    double acc = sample_worker_accuracy(bp.alpha, bp.beta, rng);
                    for (std::size_t j = 0; j < n; ++j) {
                        if (config.same_task_fresh_accuracy && j > 0)
                            acc = sample_worker_accuracy(bp.alpha, bp.beta, rng);
                        votes[j][w] = cast_vote(item.bits[j] ? 1 : 0, acc, rng);
                        // the log schema names predicates positionally
                        log_vote(Condition::P1P2, item.item_id, w,
                                 "p" + std::to_string(j + 1), votes[j][w]);
                    }
                }
                std::vector<int> verdicts(n);
                for (std::size_t j = 0; j < n; ++j)
                    verdicts[j] = majority_vote(votes[j], config.tie_rule);
                decisions.push_back(conjunction(verdicts));
                truths.push_back(item.in_label() ? 1 : 0);
            }
            break;
        }
        case TaskDesign::SeparateTasks: {
            std::vector<BetaParams> bps(n);
            for (std::size_t j = 0; j < n; ++j)
                bps[j] = beta_params_from_mean_var(mus[j], vars[j]);
            std::vector<int> votes(b);
            std::vector<int> verdicts(n);
            for (const auto& item : pool.items) {
                for (std::size_t j = 0; j < n; ++j) {
                    for (std::uint64_t w = 0; w < b; ++w) {
                        const double acc =
                            sample_worker_accuracy(bps[j].alpha, bps[j].beta, rng);
                        votes[w] = cast_vote(item.bits[j] ? 1 : 0, acc, rng);
                        log_vote(separate_condition(j), item.item_id, j * b + w,
                                 "p" + std::to_string(j + 1), votes[w]);
                    }
                    verdicts[j] = majority_vote(votes, config.tie_rule);
                }
                decisions.push_back(conjunction(verdicts));
                truths.push_back(item.in_label() ? 1 : 0);
            }
            break;
        }
    }

    const ConfusionCounts counts = confusion(decisions, truths);

    ConditionResult result;
    result.design = design;
    result.n = n;
    result.selectivities = cp.selectivities();
    result.mu_list = mus;
    result.sigma2 = shared_var;
    result.budget = config.budget_b;
    result.gamma = cp.penalty;
    result.trial = trial;
    result.precision = precision(counts);
    result.recall = recall(counts);
    result.f_scores.reserve(config.beta_weights.size());
    const bool undefined = counts.tp + counts.fp + counts.fn == 0;
    for (double beta : config.beta_weights)
        result.f_scores.emplace_back(
            beta, undefined ? std::numeric_limits<double>::quiet_NaN()
                            : f_beta(counts, beta));
    result.cost_labels = cost_for(design, pool.items.size(), n, b);
    return result;
}

namespace {

void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(
        std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::mutex error_mutex;
    std::exception_ptr error;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

std::vector<ConditionResult> run_experiment(const SimulationConfig& config,
                                            std::span<const TaskDesign> designs,
                                            unsigned threads, int capture_trial,
                                            TrialLog* log) {
    ensure_valid(config);
    if (designs.empty()) throw EmptyInput("run_experiment requires at least one design");

    const std::size_t trials = static_cast<std::size_t>(config.trials);
    const std::size_t slots = designs.size() * trials;
    std::vector<ConditionResult> results(slots);
    std::vector<TrialLog> captured(capture_trial >= 0 && log ? designs.size() : 0);

    parallel_for(slots, threads, [&](std::size_t slot) {
        const std::size_t d = slot / trials;
        const int trial = static_cast<int>(slot % trials);
        const TaskDesign design = designs[d];
        TrialLog* slot_log =
            (!captured.empty() && trial == capture_trial) ? &captured[d] : nullptr;
        results[slot] = run_condition(config, design,
                                      trial_stream_seed(config.seed, design, trial),
                                      trial, slot_log);
    });

    for (auto& part : captured) {
        log->judgments.insert(log->judgments.end(),
                              std::make_move_iterator(part.judgments.begin()),
                              std::make_move_iterator(part.judgments.end()));
        log->truths.insert(log->truths.end(),
                           std::make_move_iterator(part.truths.begin()),
                           std::make_move_iterator(part.truths.end()));
    }
    return results;
}

namespace {

std::vector<double> scalar_or_array(const nlohmann::json& v, const char* key) {
    std::vector<double> out;
    if (v.is_number()) {
        out.push_back(v.get<double>());
    } else if (v.is_array()) {
        if (v.empty())
            throw ParseError(std::string("grid key '") + key + "' must be non-empty");
        for (const auto& e : v) {
            if (!e.is_number())
                throw ParseError(std::string("grid key '") + key +
                                 "' must hold numbers");
            out.push_back(e.get<double>());
        }
    } else {
        throw ParseError(std::string("grid key '") + key +
                         "' must be a number or an array");
    }
    return out;
}

// s and mu entries: scalar, or array of scalars, or array of (scalar | array
// of per-predicate scalars).
std::vector<std::vector<double>> nested_values(const nlohmann::json& v, const char* key) {
    std::vector<std::vector<double>> out;
    if (v.is_number()) {
        out.push_back({v.get<double>()});
        return out;
    }
    if (!v.is_array() || v.empty())
        throw ParseError(std::string("grid key '") + key +
                         "' must be a number or a non-empty array");
    for (const auto& e : v) {
        if (e.is_number()) {
            out.push_back({e.get<double>()});
        } else if (e.is_array() && !e.empty()) {
            std::vector<double> inner;
            for (const auto& x : e) {
                if (!x.is_number())
                    throw ParseError(std::string("grid key '") + key +
                                     "' has a non-numeric entry");
                inner.push_back(x.get<double>());
            }
            out.push_back(std::move(inner));
        } else {
            throw ParseError(std::string("grid key '") + key + "' has an invalid entry");
        }
    }
    return out;
}

}  // namespace

SweepGrid grid_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("grid must be a JSON object");
    static const char* known[] = {"n", "s", "mu", "sigma2", "b", "gamma", "beta"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find_if(std::begin(known), std::end(known),
                         [&](const char* k) { return key == k; }) == std::end(known))
            throw ParseError("unknown grid key '" + key + "'");
    }
    SweepGrid grid;
    if (j.contains("n")) {
        for (double v : scalar_or_array(j.at("n"), "n")) {
            if (v < 1 || v != std::floor(v))
                throw ParseError("grid key 'n' must hold positive integers");
            grid.n_values.push_back(static_cast<std::size_t>(v));
        }
    }
    if (j.contains("s")) grid.s_values = nested_values(j.at("s"), "s");
    if (j.contains("mu")) grid.mu_values = nested_values(j.at("mu"), "mu");
    if (j.contains("sigma2")) grid.sigma2_values = scalar_or_array(j.at("sigma2"), "sigma2");
    if (j.contains("b")) {
        for (double v : scalar_or_array(j.at("b"), "b")) {
            if (v < 1 || v != std::floor(v))
                throw ParseError("grid key 'b' must hold positive integers");
            grid.b_values.push_back(static_cast<int>(v));
        }
    }
    if (j.contains("gamma")) grid.gamma_values = scalar_or_array(j.at("gamma"), "gamma");
    if (j.contains("beta")) grid.beta_values = scalar_or_array(j.at("beta"), "beta");
    return grid;
}

SweepGrid load_grid(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open grid file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid grid JSON: ") + e.what());
    }
    return grid_from_json(j);
}

namespace {

std::vector<double> broadcast(const std::vector<double>& values, std::size_t n,
                              const char* key) {
    if (values.size() == n) return values;
    if (values.size() == 1) return std::vector<double>(n, values.front());
    throw ParseError(std::string("grid key '") + key + "' entry has length " +
                     std::to_string(values.size()) + " but the point has n = " +
                     std::to_string(n));
}

}  // namespace

std::vector<ParamPoint> expand_grid(const SweepGrid& grid, const SimulationConfig& base) {
    const auto& cp = base.complex_predicate;

    std::vector<std::size_t> ns = grid.n_values;
    if (ns.empty()) ns.push_back(cp.size());
    for (std::size_t n : ns)
        if (n == 0)
            throw ParseError("grid must supply n when the base config has no predicates");
    std::vector<std::vector<double>> ss = grid.s_values;
    if (ss.empty()) {
        if (cp.size() == 0)
            throw ParseError("grid must supply s when the base config has no predicates");
        ss.push_back(cp.selectivities());
    }
    std::vector<std::vector<double>> mus = grid.mu_values;
    if (mus.empty()) {
        if (cp.size() == 0)
            throw ParseError("grid must supply mu when the base config has no predicates");
        mus.push_back(cp.accuracy_means());
    }
    std::vector<double> sigma2s = grid.sigma2_values;
    if (sigma2s.empty()) {
        const auto vars = cp.accuracy_vars();
        sigma2s.push_back(vars.empty() ? 0.04 : mean_of(vars));
    }
    std::vector<int> bs = grid.b_values;
    if (bs.empty()) bs.push_back(base.budget_b);
    std::vector<double> gammas = grid.gamma_values;
    if (gammas.empty()) gammas.push_back(cp.penalty);

    std::vector<ParamPoint> points;
    points.reserve(ns.size() * ss.size() * mus.size() * sigma2s.size() * bs.size() *
                   gammas.size());
    for (std::size_t n : ns)
        for (const auto& s : ss)
            for (const auto& mu : mus)
                for (double sigma2 : sigma2s)
                    for (int b : bs)
                        for (double gamma : gammas) {
                            ParamPoint p;
                            p.n = n;
                            p.selectivities = broadcast(s, n, "s");
                            p.mus = broadcast(mu, n, "mu");
                            p.sigma2 = sigma2;
                            p.budget = b;
                            p.gamma = gamma;
                            points.push_back(std::move(p));
                        }
    return points;
}

SimulationConfig apply_point(const SimulationConfig& base, const ParamPoint& point,
                             std::span<const double> beta_weights) {
    SimulationConfig config = base;
    config.complex_predicate.penalty = point.gamma;
    config.complex_predicate.predicates.clear();
    for (std::size_t j = 0; j < point.n; ++j) {
        PredicateSpec p;
        p.id = "p" + std::to_string(j + 1);
        p.selectivity = point.selectivities[j];
        p.accuracy_mean = point.mus[j];
        p.accuracy_var = point.sigma2;
        config.complex_predicate.predicates.push_back(std::move(p));
    }
    config.budget_b = point.budget;
    config.beta_weights.assign(beta_weights.begin(), beta_weights.end());
    return config;
}

std::vector<ConditionResult> sweep(const SweepGrid& grid, const SimulationConfig& base,
                                   std::span<const TaskDesign> designs, unsigned threads) {
    const auto points = expand_grid(grid, base);
    if (points.empty()) throw EmptyInput("sweep grid expands to no points");
    const std::vector<double> betas =
        grid.beta_values.empty() ? base.beta_weights : grid.beta_values;

    std::vector<ConditionResult> all;
    for (std::size_t k = 0; k < points.size(); ++k) {
        SimulationConfig config = apply_point(base, points[k], betas);
        config.seed = mix_seed(base.seed, k);
        auto results = run_experiment(config, designs, threads);
        all.insert(all.end(), std::make_move_iterator(results.begin()),
                   std::make_move_iterator(results.end()));
    }
    return all;
}

namespace {

std::string join_list(std::span<const double> values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ';';
        out += detail::format_double(values[i]);
    }
    return out;
}

}  // namespace

void write_results_csv(std::span<const ConditionResult> results, std::ostream& out) {
    out << "design,n,selectivities,mu_list,sigma2,budget,gamma,trial,precision,recall,"
           "beta,f_beta,cost_labels\n";
    for (const auto& r : results) {
        const std::string prefix =
            std::string(to_string(r.design)) + "," + std::to_string(r.n) + "," +
            join_list(r.selectivities) + "," + join_list(r.mu_list) + "," +
            detail::format_double(r.sigma2) + "," + std::to_string(r.budget) + "," +
            detail::format_double(r.gamma) + "," + std::to_string(r.trial) + "," +
            detail::format_double(r.precision) + "," + detail::format_double(r.recall);
        for (const auto& [beta, score] : r.f_scores)
            out << prefix << ',' << detail::format_double(beta) << ','
                << detail::format_double(score) << ',' << r.cost_labels << '\n';
    }
}

void write_results_csv(std::span<const ConditionResult> results, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    write_results_csv(results, out);
    out.flush();
    if (!out) throw IoError("failed writing output file: " + path);
}

}  // namespace predsim
