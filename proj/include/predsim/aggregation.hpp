#pragma once

// Vote aggregation: majority voting per question, conjunction across
// predicates, and crowd/machine hybrid composition.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "predsim/types.hpp"

namespace predsim {

// Question id used for votes on the complex predicate itself.
inline constexpr const char* kComplexQuestion = "complex";

struct VoteSet {
    std::string item_id;
    std::string question;  // kComplexQuestion or a predicate id
    std::vector<int> votes;
};

int majority_vote(std::span<const int> votes, TieRule tie_rule);

// 1 iff every verdict is 1.
int conjunction(std::span<const int> verdicts);

// Baseline: majority over the complex-question votes. SameTask and
// SeparateTasks: conjunction of per-predicate majorities, which makes them
// the identical function of the supplied vote sets; the designs differ only
// in how the votes were generated upstream.
// expected_questions: {kComplexQuestion} for Baseline, the predicate ids
// otherwise. Throws MissingKey naming any absent question.
int classify_item(TaskDesign design, std::span<const std::string> expected_questions,
                  const std::map<std::string, VoteSet>& per_question_votes,
                  TieRule tie_rule);

enum class Source { Crowd, Machine };

struct SourceAssignment {
    std::map<std::string, Source> by_predicate;  // every predicate of P maps to one source
};

// Picks each predicate's verdict from its assigned source, then conjoins.
int compose_hybrid(const SourceAssignment& assignment,
                   const std::map<std::string, int>& crowd_verdicts,
                   const std::map<std::string, int>& machine_verdicts);

}  // namespace predsim
