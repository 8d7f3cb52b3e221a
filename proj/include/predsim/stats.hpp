#pragma once

// Nonparametric tests: Kruskal-Wallis H with tie correction, Dunn's pairwise
// post-hoc z-tests, and Benjamini-Hochberg FDR adjustment.

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "predsim/errors.hpp"

namespace predsim {

struct GroupedSamples {
    std::vector<std::pair<std::string, std::vector<double>>> groups;
};

struct TestResult {
    double statistic = 0.0;
    int degrees_of_freedom = 0;
    double p_value = 1.0;
};

// H on mid-ranks with tie correction divisor 1 - sum(t^3 - t)/(N^3 - N);
// p from the chi-squared upper tail with k-1 df. Data with no variation at
// all returns H = 0, p = 1.
TestResult kruskal_wallis(const GroupedSamples& samples);

struct DunnComparison {
    std::string group_a;
    std::string group_b;
    double z = 0.0;
    double p_raw = 1.0;  // two-sided
};

// One comparison per unordered group pair, in group order:
// z = (Rbar_a - Rbar_b) / sqrt((N(N+1)/12 - sum(t^3-t)/(12(N-1))) (1/n_a + 1/n_b)).
// tie_correction=false drops the tie term from the variance.
std::vector<DunnComparison> dunn_posthoc(const GroupedSamples& samples,
                                         bool tie_correction = true);

struct BhResult {
    double p_adjusted = 1.0;
    bool rejected = false;
};

// Step-up adjustment: adjusted p_i = min over j >= rank(i) of m p_(j) / j,
// clipped to 1; rejected iff adjusted p <= q. Results align with the input
// order.
std::vector<BhResult> benjamini_hochberg(std::span<const double> p_values, double q);

}  // namespace predsim
