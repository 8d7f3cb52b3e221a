#include "predsim/aggregation.hpp"

namespace predsim {

int majority_vote(std::span<const int> votes, TieRule tie_rule) {
    if (votes.empty()) throw EmptyInput("majority_vote on empty vote list");
    std::size_t ones = 0;
    for (int v : votes) ones += v != 0;
    const std::size_t zeros = votes.size() - ones;
    if (ones > zeros) return 1;
    if (zeros > ones) return 0;
    return tie_rule == TieRule::In ? 1 : 0;
}

int conjunction(std::span<const int> verdicts) {
    if (verdicts.empty()) throw EmptyInput("conjunction on empty verdict vector");
    for (int v : verdicts)
        if (v == 0) return 0;
    return 1;
}

int classify_item(TaskDesign design, std::span<const std::string> expected_questions,
                  const std::map<std::string, VoteSet>& per_question_votes,
                  TieRule tie_rule) {
    if (expected_questions.empty())
        throw EmptyInput("classify_item needs at least one expected question");

    std::vector<int> verdicts;
    verdicts.reserve(expected_questions.size());
    for (const auto& question : expected_questions) {
        auto it = per_question_votes.find(question);
        if (it == per_question_votes.end())
            throw MissingKey("no vote set for question '" + question + "'");
        verdicts.push_back(majority_vote(it->second.votes, tie_rule));
    }

    if (design == TaskDesign::Baseline) return verdicts.front();
    return conjunction(verdicts);
}

int compose_hybrid(const SourceAssignment& assignment,
                   const std::map<std::string, int>& crowd_verdicts,
                   const std::map<std::string, int>& machine_verdicts) {
    if (assignment.by_predicate.empty())
        throw EmptyInput("hybrid composition needs at least one predicate");
    std::vector<int> verdicts;
    verdicts.reserve(assignment.by_predicate.size());
    for (const auto& [predicate, source] : assignment.by_predicate) {
        const auto& verdict_map = source == Source::Crowd ? crowd_verdicts : machine_verdicts;
        auto it = verdict_map.find(predicate);
        if (it == verdict_map.end())
            throw MissingKey("no " +
                             std::string(source == Source::Crowd ? "crowd" : "machine") +
                             " verdict for predicate '" + predicate + "'");
        verdicts.push_back(it->second);
    }
    return conjunction(verdicts);
}

}  // namespace predsim
