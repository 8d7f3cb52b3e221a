#include "predsim/metrics.hpp"

#include <limits>
#include <sstream>

namespace predsim {

namespace {

void tally(ConfusionCounts& counts, int decision, int truth) {
    if (truth != 0) {
        decision != 0 ? ++counts.tp : ++counts.fn;
    } else {
        decision != 0 ? ++counts.fp : ++counts.tn;
    }
}

}  // namespace

ConfusionCounts confusion(const std::map<std::string, int>& decisions,
                          const std::map<std::string, int>& truths) {
    std::ostringstream missing;
    for (const auto& [id, _] : decisions)
        if (!truths.count(id)) missing << " decision-only:" << id;
    for (const auto& [id, _] : truths)
        if (!decisions.count(id)) missing << " truth-only:" << id;
    if (const auto diff = missing.str(); !diff.empty())
        throw MissingKey("decision/truth key sets differ:" + diff);

    ConfusionCounts counts;
    for (const auto& [id, decision] : decisions) tally(counts, decision, truths.at(id));
    return counts;
}

ConfusionCounts confusion(std::span<const int> decisions, std::span<const int> truths) {
    if (decisions.size() != truths.size())
        throw MissingKey("decision/truth vectors differ in length");
    ConfusionCounts counts;
    for (std::size_t i = 0; i < decisions.size(); ++i)
        tally(counts, decisions[i], truths[i]);
    return counts;
}

double precision(const ConfusionCounts& counts) {
    const auto denom = counts.tp + counts.fp;
    if (denom == 0) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(counts.tp) / static_cast<double>(denom);
}

double recall(const ConfusionCounts& counts) {
    const auto denom = counts.tp + counts.fn;
    if (denom == 0) return std::numeric_limits<double>::quiet_NaN();
    return static_cast<double>(counts.tp) / static_cast<double>(denom);
}

double f_beta(const ConfusionCounts& counts, double beta) {
    if (!(beta > 0.0)) throw DomainError("beta must be > 0");
    if (counts.tp + counts.fp + counts.fn == 0)
        throw NoPositives("no positive ground truth and no positive predictions");
    if (counts.tp == 0) return 0.0;
    const double p = precision(counts);
    const double r = recall(counts);
    const double b2 = beta * beta;
    return (1.0 + b2) * p * r / (b2 * p + r);
}

}  // namespace predsim
