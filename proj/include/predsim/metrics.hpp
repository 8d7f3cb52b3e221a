#pragma once

// Confusion-matrix accounting and F_beta scoring. IN (all predicates
// satisfied) is the positive class throughout.

#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "predsim/errors.hpp"

namespace predsim {

struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const { return tp + fp + tn + fn; }
};

// Maps must have identical key sets; throws MissingKey listing the symmetric
// difference otherwise.
ConfusionCounts confusion(const std::map<std::string, int>& decisions,
                          const std::map<std::string, int>& truths);

// Index-aligned variant used by the engine.
ConfusionCounts confusion(std::span<const int> decisions, std::span<const int> truths);

// tp/(tp+fp); NaN when no positive predictions exist.
double precision(const ConfusionCounts& counts);
// tp/(tp+fn); NaN when no positive ground truth exists.
double recall(const ConfusionCounts& counts);

// (1+beta^2) P R / (beta^2 P + R). Returns 0 when tp = 0 but error mass
// exists; throws NoPositives when tp+fp+fn = 0 (the score is undefined).
double f_beta(const ConfusionCounts& counts, double beta);

}  // namespace predsim
