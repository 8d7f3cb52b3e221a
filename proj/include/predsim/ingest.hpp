#pragma once

// Judgment-log parsing and the per-condition analyses that run on it:
// condition-level F1, per-worker accuracy with rank tests, decision times.

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "predsim/stats.hpp"
#include "predsim/types.hpp"

namespace predsim {

// Experimental conditions of the two-predicate crowd study.
enum class Condition { Baseline, P1P2, P1, P2 };

const char* to_string(Condition condition);
Condition condition_from_string(const std::string& name);

struct JudgmentRecord {
    std::string worker_id;
    std::string item_id;
    Condition condition = Condition::Baseline;
    std::string predicate_id;  // "complex" or a positional "p<k>"
    int answer = 0;
    std::optional<double> decision_time_s;
};

struct GroundTruthRecord {
    std::string item_id;
    std::vector<std::uint8_t> bits;

    bool in_label() const {
        for (auto b : bits)
            if (!b) return false;
        return !bits.empty();
    }
};

// CSV header: worker_id,item_id,condition,predicate_id,answer,decision_time_s
// Every row is validated; errors carry the 1-based line number.
std::vector<JudgmentRecord> parse_judgments(std::istream& in);
std::vector<JudgmentRecord> parse_judgments(const std::filesystem::path& path);
void write_judgments_csv(std::span<const JudgmentRecord> records, std::ostream& out);
void write_judgments_csv(std::span<const JudgmentRecord> records,
                         const std::filesystem::path& path);

// CSV header: item_id,p_1,...,p_n,in_label (the pool export schema). The
// in_label column must equal the conjunction of the bits.
std::vector<GroundTruthRecord> parse_truth(std::istream& in);
std::vector<GroundTruthRecord> parse_truth(const std::filesystem::path& path);

// How to score a classification run. The first three score against the
// conjunction (in_label); P1/P2 score against that predicate's own bit.
// P1AndP2 joins the verdicts of the separate P1 and P2 conditions.
enum class ConditionMode { Baseline, P1P2, P1AndP2, P1, P2 };

const char* to_string(ConditionMode mode);

// Majority-vote per (item, question) over the mode's condition(s), then F1.
// Items judged under the mode's condition(s) define the scored set; any of
// them missing a required vote set raises MissingKey, as does a judged item
// without ground truth.
double condition_f1(std::span<const JudgmentRecord> judgments,
                    std::span<const GroundTruthRecord> truths, ConditionMode mode,
                    TieRule tie_rule = TieRule::Out);

struct WorkerAccuracy {
    std::string worker_id;
    Condition condition = Condition::Baseline;
    double accuracy = 0.0;
    std::size_t judged = 0;
};

struct WorkerAccuracyStats {
    std::vector<WorkerAccuracy> per_worker;
    std::map<Condition, double> median_by_condition;
};

// Accuracy = fraction of a worker's answers matching the relevant truth bit
// ("complex" rows score against in_label, p<k> rows against bit k).
WorkerAccuracyStats worker_accuracy_stats(std::span<const JudgmentRecord> judgments,
                                          std::span<const GroundTruthRecord> truths);

// Median decision time per condition, over records that carry a time.
std::map<Condition, double> decision_time_summary(std::span<const JudgmentRecord> judgments);

// Full analysis report: per-condition F1, median worker accuracy, median
// decision time, and Kruskal-Wallis + Dunn/Benjamini-Hochberg on per-worker
// accuracies across conditions. fdr_q is the BH false-discovery rate.
nlohmann::json analysis_report(std::span<const JudgmentRecord> judgments,
                               std::span<const GroundTruthRecord> truths,
                               double fdr_q = 0.05);

}  // namespace predsim
