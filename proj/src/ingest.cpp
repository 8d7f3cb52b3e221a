#include "predsim/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "predsim/aggregation.hpp"
#include "predsim/metrics.hpp"
#include "text_util.hpp"

namespace predsim {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current += c;
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

double parse_number(const std::string& text, std::size_t line, const char* field) {
    double value = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end)
        throw ParseError(line, std::string(field) + " is not a number: '" + text + "'");
    return value;
}

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size() / 2;
    if (values.size() % 2) return values[m];
    return 0.5 * (values[m - 1] + values[m]);
}

}  // namespace

const char* to_string(Condition condition) {
    switch (condition) {
        case Condition::Baseline: return "baseline";
        case Condition::P1P2: return "p1_p2";
        case Condition::P1: return "p1";
        case Condition::P2: return "p2";
    }
    return "?";
}

Condition condition_from_string(const std::string& name) {
    if (name == "baseline") return Condition::Baseline;
    if (name == "p1_p2") return Condition::P1P2;
    if (name == "p1") return Condition::P1;
    if (name == "p2") return Condition::P2;
    throw UnknownCondition("unknown condition '" + name + "'");
}

const char* to_string(ConditionMode mode) {
    switch (mode) {
        case ConditionMode::Baseline: return "baseline";
        case ConditionMode::P1P2: return "p1_p2";
        case ConditionMode::P1AndP2: return "p1_and_p2";
        case ConditionMode::P1: return "p1";
        case ConditionMode::P2: return "p2";
    }
    return "?";
}

namespace {

void check_consistency(const JudgmentRecord& rec, std::size_t line) {
    switch (rec.condition) {
        case Condition::Baseline:
            if (rec.predicate_id != kComplexQuestion)
                throw ParseError(line, "baseline rows must carry predicate_id '" +
                                           std::string(kComplexQuestion) + "', got '" +
                                           rec.predicate_id + "'");
            return;
        case Condition::P1:
            if (rec.predicate_id != "p1")
                throw ParseError(line, "p1 rows must carry predicate_id 'p1', got '" +
                                           rec.predicate_id + "'");
            return;
        case Condition::P2:
            if (rec.predicate_id != "p2")
                throw ParseError(line, "p2 rows must carry predicate_id 'p2', got '" +
                                           rec.predicate_id + "'");
            return;
        case Condition::P1P2:
            if (rec.predicate_id != "p1" && rec.predicate_id != "p2")
                throw ParseError(line,
                                 "p1_p2 rows must carry predicate_id 'p1' or 'p2', got '" +
                                     rec.predicate_id + "'");
            return;
    }
}

}  // namespace

std::vector<JudgmentRecord> parse_judgments(std::istream& in) {
    static const std::string kHeader =
        "worker_id,item_id,condition,predicate_id,answer,decision_time_s";
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != kHeader)
        throw ParseError(1, "expected header '" + kHeader + "'");

    std::vector<JudgmentRecord> records;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 6)
            throw ParseError(line_no, "expected 6 fields, got " +
                                          std::to_string(fields.size()));
        JudgmentRecord rec;
        rec.worker_id = fields[0];
        rec.item_id = fields[1];
        if (rec.worker_id.empty()) throw ParseError(line_no, "empty worker_id");
        if (rec.item_id.empty()) throw ParseError(line_no, "empty item_id");
        try {
            rec.condition = condition_from_string(fields[2]);
        } catch (const UnknownCondition& e) {
            throw UnknownCondition(line_no, e.what());
        }
        rec.predicate_id = fields[3];
        if (fields[4] == "0")
            rec.answer = 0;
        else if (fields[4] == "1")
            rec.answer = 1;
        else
            throw NonBinaryAnswer(line_no, "answer must be 0 or 1, got '" + fields[4] + "'");
        if (!fields[5].empty()) {
            const double t = parse_number(fields[5], line_no, "decision_time_s");
            if (t < 0.0) throw ParseError(line_no, "decision_time_s must be non-negative");
            rec.decision_time_s = t;
        }
        check_consistency(rec, line_no);
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<JudgmentRecord> parse_judgments(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open judgments file: " + path.string());
    return parse_judgments(in);
}

void write_judgments_csv(std::span<const JudgmentRecord> records, std::ostream& out) {
    out << "worker_id,item_id,condition,predicate_id,answer,decision_time_s\n";
    for (const auto& rec : records) {
        out << rec.worker_id << ',' << rec.item_id << ',' << to_string(rec.condition)
            << ',' << rec.predicate_id << ',' << rec.answer << ',';
        if (rec.decision_time_s) out << detail::format_double(*rec.decision_time_s);
        out << '\n';
    }
}

void write_judgments_csv(std::span<const JudgmentRecord> records,
                         const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path.string());
    write_judgments_csv(records, out);
    out.flush();
    if (!out) throw IoError("failed writing output file: " + path.string());
}

std::vector<GroundTruthRecord> parse_truth(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw ParseError(1, "empty truth file, expected header item_id,p_1,...,in_label");
    const auto header = split_csv(strip_cr(line));
    if (header.size() < 3 || header.front() != "item_id" || header.back() != "in_label")
        throw ParseError(1, "expected header item_id,p_1,...,p_n,in_label");
    const std::size_t n = header.size() - 2;
    for (std::size_t j = 0; j < n; ++j)
        if (header[j + 1] != "p_" + std::to_string(j + 1))
            throw ParseError(1, "expected predicate column p_" + std::to_string(j + 1) +
                                    ", got '" + header[j + 1] + "'");

    std::vector<GroundTruthRecord> records;
    std::set<std::string> seen;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != n + 2)
            throw ParseError(line_no, "expected " + std::to_string(n + 2) +
                                          " fields, got " + std::to_string(fields.size()));
        GroundTruthRecord rec;
        rec.item_id = fields[0];
        if (rec.item_id.empty()) throw ParseError(line_no, "empty item_id");
        if (!seen.insert(rec.item_id).second)
            throw ParseError(line_no, "duplicate item_id '" + rec.item_id + "'");
        rec.bits.reserve(n);
        for (std::size_t j = 0; j < n; ++j) {
            const std::string& bit = fields[j + 1];
            if (bit != "0" && bit != "1")
                throw ParseError(line_no, "predicate labels must be 0 or 1, got '" + bit +
                                              "'");
            rec.bits.push_back(bit == "1" ? 1 : 0);
        }
        const std::string& in_label = fields[n + 1];
        if (in_label != "0" && in_label != "1")
            throw ParseError(line_no, "in_label must be 0 or 1, got '" + in_label + "'");
        if ((in_label == "1") != rec.in_label())
            throw ParseError(line_no,
                             "in_label does not equal the conjunction of the bits");
        records.push_back(std::move(rec));
    }
    return records;
}

std::vector<GroundTruthRecord> parse_truth(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open truth file: " + path.string());
    return parse_truth(in);
}

namespace {

using VoteKey = std::pair<std::string, std::string>;  // (item_id, predicate_id)

struct ConditionVotes {
    // Votes per (item, question) under one condition.
    std::map<VoteKey, std::vector<int>> votes;
    std::set<std::string> items;
};

ConditionVotes collect(std::span<const JudgmentRecord> judgments, Condition condition) {
    ConditionVotes out;
    for (const auto& rec : judgments) {
        if (rec.condition != condition) continue;
        out.votes[{rec.item_id, rec.predicate_id}].push_back(rec.answer);
        out.items.insert(rec.item_id);
    }
    return out;
}

// Majority verdict per item over the condition's question set; every item
// seen under the condition must carry votes on every required question.
std::map<std::string, int> condition_verdicts(const ConditionVotes& cv,
                                              std::span<const std::string> questions,
                                              TieRule tie_rule) {
    std::map<std::string, int> verdicts;
    std::vector<std::string> missing;
    for (const auto& item : cv.items) {
        std::vector<int> per_question;
        bool complete = true;
        for (const auto& q : questions) {
            auto it = cv.votes.find({item, q});
            if (it == cv.votes.end()) {
                complete = false;
                break;
            }
            per_question.push_back(majority_vote(it->second, tie_rule));
        }
        if (!complete) {
            missing.push_back(item);
            continue;
        }
        verdicts[item] = conjunction(per_question);
    }
    if (!missing.empty()) {
        std::string msg = "items lacking votes on every required question:";
        for (const auto& id : missing) msg += " " + id;
        throw MissingKey(msg);
    }
    return verdicts;
}

std::map<std::string, const GroundTruthRecord*> truth_index(
    std::span<const GroundTruthRecord> truths) {
    std::map<std::string, const GroundTruthRecord*> index;
    for (const auto& t : truths) index[t.item_id] = &t;
    return index;
}

int truth_bit(const GroundTruthRecord& rec, const std::string& predicate_id) {
    if (predicate_id == kComplexQuestion) return rec.in_label() ? 1 : 0;
    // predicate ids are positional: p1 -> bit 0, p2 -> bit 1, ...
    if (predicate_id.size() >= 2 && predicate_id.front() == 'p') {
        std::size_t k = 0;
        const char* begin = predicate_id.data() + 1;
        const char* end = predicate_id.data() + predicate_id.size();
        auto [ptr, ec] = std::from_chars(begin, end, k);
        if (ec == std::errc{} && ptr == end && k >= 1 && k <= rec.bits.size())
            return rec.bits[k - 1] ? 1 : 0;
    }
    throw MissingKey("no truth bit for predicate '" + predicate_id + "' on item '" +
                     rec.item_id + "'");
}

double score_f1(const std::map<std::string, int>& verdicts,
                std::span<const GroundTruthRecord> truths,
                const std::string& truth_predicate, TieRule) {
    const auto index = truth_index(truths);
    std::vector<int> decisions;
    std::vector<int> labels;
    std::vector<std::string> missing;
    for (const auto& [item, verdict] : verdicts) {
        auto it = index.find(item);
        if (it == index.end()) {
            missing.push_back(item);
            continue;
        }
        decisions.push_back(verdict);
        labels.push_back(truth_bit(*it->second, truth_predicate));
    }
    if (!missing.empty()) {
        std::string msg = "judged items without ground truth:";
        for (const auto& id : missing) msg += " " + id;
        throw MissingKey(msg);
    }
    if (decisions.empty()) throw EmptyInput("no judged items for this condition");
    return f_beta(confusion(decisions, labels), 1.0);
}

}  // namespace

double condition_f1(std::span<const JudgmentRecord> judgments,
                    std::span<const GroundTruthRecord> truths, ConditionMode mode,
                    TieRule tie_rule) {
    static const std::vector<std::string> kComplexOnly = {kComplexQuestion};
    static const std::vector<std::string> kP1 = {"p1"};
    static const std::vector<std::string> kP2 = {"p2"};
    static const std::vector<std::string> kBoth = {"p1", "p2"};

    switch (mode) {
        case ConditionMode::Baseline: {
            const auto cv = collect(judgments, Condition::Baseline);
            return score_f1(condition_verdicts(cv, kComplexOnly, tie_rule), truths,
                            kComplexQuestion, tie_rule);
        }
        case ConditionMode::P1P2: {
            const auto cv = collect(judgments, Condition::P1P2);
            return score_f1(condition_verdicts(cv, kBoth, tie_rule), truths,
                            kComplexQuestion, tie_rule);
        }
        case ConditionMode::P1: {
            const auto cv = collect(judgments, Condition::P1);
            return score_f1(condition_verdicts(cv, kP1, tie_rule), truths, "p1", tie_rule);
        }
        case ConditionMode::P2: {
            const auto cv = collect(judgments, Condition::P2);
            return score_f1(condition_verdicts(cv, kP2, tie_rule), truths, "p2", tie_rule);
        }
        case ConditionMode::P1AndP2: {
            const auto v1 = condition_verdicts(collect(judgments, Condition::P1), kP1,
                                               tie_rule);
            const auto v2 = condition_verdicts(collect(judgments, Condition::P2), kP2,
                                               tie_rule);
            std::set<std::string> all_items;
            for (const auto& [item, v] : v1) all_items.insert(item);
            for (const auto& [item, v] : v2) all_items.insert(item);
            std::map<std::string, int> joined;
            std::vector<std::string> missing;
            for (const auto& item : all_items) {
                auto i1 = v1.find(item);
                auto i2 = v2.find(item);
                if (i1 == v1.end() || i2 == v2.end()) {
                    missing.push_back(item);
                    continue;
                }
                joined[item] = i1->second & i2->second;
            }
            if (!missing.empty()) {
                std::string msg = "items judged under only one of p1/p2:";
                for (const auto& id : missing) msg += " " + id;
                throw MissingKey(msg);
            }
            return score_f1(joined, truths, kComplexQuestion, tie_rule);
        }
    }
    throw DomainError("unhandled condition mode");
}

WorkerAccuracyStats worker_accuracy_stats(std::span<const JudgmentRecord> judgments,
                                          std::span<const GroundTruthRecord> truths) {
    const auto index = truth_index(truths);

    struct Tally {
        std::size_t correct = 0;
        std::size_t total = 0;
    };
    std::map<std::pair<std::string, Condition>, Tally> tallies;
    std::vector<std::string> missing;
    for (const auto& rec : judgments) {
        auto it = index.find(rec.item_id);
        if (it == index.end()) {
            missing.push_back(rec.item_id);
            continue;
        }
        auto& tally = tallies[{rec.worker_id, rec.condition}];
        tally.total += 1;
        if (rec.answer == truth_bit(*it->second, rec.predicate_id)) tally.correct += 1;
    }
    if (!missing.empty()) {
        std::sort(missing.begin(), missing.end());
        missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
        std::string msg = "judged items without ground truth:";
        for (const auto& id : missing) msg += " " + id;
        throw MissingKey(msg);
    }

    WorkerAccuracyStats stats;
    std::map<Condition, std::vector<double>> by_condition;
    for (const auto& [key, tally] : tallies) {
        WorkerAccuracy wa;
        wa.worker_id = key.first;
        wa.condition = key.second;
        wa.judged = tally.total;
        wa.accuracy = static_cast<double>(tally.correct) / static_cast<double>(tally.total);
        by_condition[wa.condition].push_back(wa.accuracy);
        stats.per_worker.push_back(std::move(wa));
    }
    for (auto& [condition, accs] : by_condition)
        stats.median_by_condition[condition] = median(std::move(accs));
    return stats;
}

std::map<Condition, double> decision_time_summary(std::span<const JudgmentRecord> judgments) {
    std::map<Condition, std::vector<double>> times;
    for (const auto& rec : judgments)
        if (rec.decision_time_s) times[rec.condition].push_back(*rec.decision_time_s);
    if (times.empty()) throw EmptyInput("no records carry a decision time");
    std::map<Condition, double> medians;
    for (auto& [condition, values] : times)
        medians[condition] = median(std::move(values));
    return medians;
}

nlohmann::json analysis_report(std::span<const JudgmentRecord> judgments,
                               std::span<const GroundTruthRecord> truths, double fdr_q) {
    nlohmann::json report;

    std::set<Condition> present;
    for (const auto& rec : judgments) present.insert(rec.condition);

    const std::pair<ConditionMode, std::vector<Condition>> modes[] = {
        {ConditionMode::Baseline, {Condition::Baseline}},
        {ConditionMode::P1P2, {Condition::P1P2}},
        {ConditionMode::P1AndP2, {Condition::P1, Condition::P2}},
        {ConditionMode::P1, {Condition::P1}},
        {ConditionMode::P2, {Condition::P2}},
    };
    nlohmann::json f1 = nlohmann::json::object();
    for (const auto& [mode, required] : modes) {
        const bool available = std::all_of(required.begin(), required.end(),
                                           [&](Condition c) { return present.count(c); });
        if (available) f1[to_string(mode)] = condition_f1(judgments, truths, mode);
    }
    report["f1"] = std::move(f1);

    const auto accuracy = worker_accuracy_stats(judgments, truths);
    nlohmann::json acc_medians = nlohmann::json::object();
    for (const auto& [condition, value] : accuracy.median_by_condition)
        acc_medians[to_string(condition)] = value;
    report["worker_accuracy_median"] = std::move(acc_medians);

    nlohmann::json time_medians = nlohmann::json::object();
    const bool any_times =
        std::any_of(judgments.begin(), judgments.end(),
                    [](const JudgmentRecord& r) { return r.decision_time_s.has_value(); });
    if (any_times)
        for (const auto& [condition, value] : decision_time_summary(judgments))
            time_medians[to_string(condition)] = value;
    report["decision_time_median_s"] = std::move(time_medians);

    // Rank tests across conditions on per-worker accuracies.
    GroupedSamples samples;
    for (Condition c :
         {Condition::Baseline, Condition::P1P2, Condition::P1, Condition::P2}) {
        std::vector<double> values;
        for (const auto& wa : accuracy.per_worker)
            if (wa.condition == c) values.push_back(wa.accuracy);
        if (!values.empty()) samples.groups.emplace_back(to_string(c), std::move(values));
    }
    if (samples.groups.size() >= 2) {
        const auto kw = kruskal_wallis(samples);
        report["kruskal_wallis"] = {{"H", kw.statistic},
                                    {"df", kw.degrees_of_freedom},
                                    {"p_value", kw.p_value}};
        const auto comparisons = dunn_posthoc(samples);
        std::vector<double> raw;
        raw.reserve(comparisons.size());
        for (const auto& c : comparisons) raw.push_back(c.p_raw);
        const auto bh = benjamini_hochberg(raw, fdr_q);
        nlohmann::json dunn = nlohmann::json::array();
        for (std::size_t i = 0; i < comparisons.size(); ++i) {
            dunn.push_back({{"group_a", comparisons[i].group_a},
                            {"group_b", comparisons[i].group_b},
                            {"z", comparisons[i].z},
                            {"p_value", comparisons[i].p_raw},
                            {"p_adjusted", bh[i].p_adjusted},
                            {"significant", bh[i].rejected}});
        }
        report["dunn"] = std::move(dunn);
        report["fdr_q"] = fdr_q;
    }
    return report;
}

}  // namespace predsim
