#include "predsim/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "predsim/numerics.hpp"

namespace predsim {

namespace {

struct RankedSamples {
    std::vector<double> group_rank_sums;
    std::vector<std::size_t> group_sizes;
    std::size_t total = 0;
    double tie_sum = 0.0;  // sum of t^3 - t over tie groups
};

RankedSamples rank_pooled(const GroupedSamples& samples) {
    if (samples.groups.size() < 2)
        throw EmptyInput("at least two groups required");
    for (const auto& [label, values] : samples.groups)
        if (values.empty())
            throw EmptyInput("group '" + label + "' is empty");

    struct Obs {
        double value;
        std::size_t group;
    };
    std::vector<Obs> pooled;
    for (std::size_t g = 0; g < samples.groups.size(); ++g)
        for (double v : samples.groups[g].second) pooled.push_back({v, g});
    std::sort(pooled.begin(), pooled.end(),
              [](const Obs& a, const Obs& b) { return a.value < b.value; });

    RankedSamples out;
    out.total = pooled.size();
    out.group_rank_sums.assign(samples.groups.size(), 0.0);
    out.group_sizes.assign(samples.groups.size(), 0);
    for (std::size_t g = 0; g < samples.groups.size(); ++g)
        out.group_sizes[g] = samples.groups[g].second.size();

    // Mid-ranks: tied runs share the average of the ranks they span.
    std::size_t i = 0;
    while (i < pooled.size()) {
        std::size_t j = i;
        while (j < pooled.size() && pooled[j].value == pooled[i].value) ++j;
        const double t = static_cast<double>(j - i);
        const double mid_rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t k = i; k < j; ++k)
            out.group_rank_sums[pooled[k].group] += mid_rank;
        if (t > 1.0) out.tie_sum += t * t * t - t;
        i = j;
    }
    return out;
}

}  // namespace

TestResult kruskal_wallis(const GroupedSamples& samples) {
    const RankedSamples ranked = rank_pooled(samples);
    const auto k = samples.groups.size();
    const double n = static_cast<double>(ranked.total);
    if (ranked.total < 3)
        throw EmptyInput("kruskal_wallis needs at least 3 observations");

    double sum = 0.0;
    for (std::size_t g = 0; g < k; ++g) {
        const double rg = ranked.group_rank_sums[g];
        sum += rg * rg / static_cast<double>(ranked.group_sizes[g]);
    }
    double h = 12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0);

    const double correction = 1.0 - ranked.tie_sum / (n * n * n - n);
    TestResult result;
    result.degrees_of_freedom = static_cast<int>(k) - 1;
    if (correction <= 0.0) {
        // Every observation tied: no variation, nothing to detect.
        result.statistic = 0.0;
        result.p_value = 1.0;
        return result;
    }
    h /= correction;
    if (h < 0.0) h = 0.0;  // guard against rounding just below zero
    result.statistic = h;
    result.p_value = chi_squared_upper_tail(h, result.degrees_of_freedom);
    return result;
}

std::vector<DunnComparison> dunn_posthoc(const GroupedSamples& samples, bool tie_correction) {
    const RankedSamples ranked = rank_pooled(samples);
    const double n = static_cast<double>(ranked.total);

    double variance_base = n * (n + 1.0) / 12.0;
    if (tie_correction) variance_base -= ranked.tie_sum / (12.0 * (n - 1.0));

    std::vector<DunnComparison> comparisons;
    for (std::size_t a = 0; a < samples.groups.size(); ++a) {
        for (std::size_t b = a + 1; b < samples.groups.size(); ++b) {
            const double na = static_cast<double>(ranked.group_sizes[a]);
            const double nb = static_cast<double>(ranked.group_sizes[b]);
            const double mean_a = ranked.group_rank_sums[a] / na;
            const double mean_b = ranked.group_rank_sums[b] / nb;
            const double variance = variance_base * (1.0 / na + 1.0 / nb);
            DunnComparison cmp;
            cmp.group_a = samples.groups[a].first;
            cmp.group_b = samples.groups[b].first;
            if (variance <= 0.0) {
                cmp.z = 0.0;
                cmp.p_raw = 1.0;
            } else {
                cmp.z = (mean_a - mean_b) / std::sqrt(variance);
                cmp.p_raw = 2.0 * normal_upper_tail(std::fabs(cmp.z));
            }
            comparisons.push_back(std::move(cmp));
        }
    }
    return comparisons;
}

std::vector<BhResult> benjamini_hochberg(std::span<const double> p_values, double q) {
    if (!(q > 0.0 && q < 1.0))
        throw DomainError("false-discovery rate q must lie in (0,1)");
    for (double p : p_values)
        if (!(p >= 0.0 && p <= 1.0))
            throw DomainError("p-values must lie in [0,1]");

    const std::size_t m = p_values.size();
    std::vector<BhResult> results(m);
    if (m == 0) return results;

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });

    // Walk from the largest p down, carrying the running minimum of m*p/j.
    double running = 1.0;
    for (std::size_t r = m; r-- > 0;) {
        const double scaled =
            p_values[order[r]] * static_cast<double>(m) / static_cast<double>(r + 1);
        running = std::min(running, std::min(scaled, 1.0));
        results[order[r]].p_adjusted = running;
        results[order[r]].rejected = running <= q;
    }
    return results;
}

}  // namespace predsim
