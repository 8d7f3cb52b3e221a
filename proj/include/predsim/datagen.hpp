#pragma once

// Synthetic item pools with ground-truth predicate bits.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "predsim/types.hpp"

namespace predsim {

struct PoolProvenance {
    std::string mode;  // "selectivity" or "class_distribution"
    std::uint64_t seed = 0;
};

struct ItemPool {
    std::vector<ItemTruth> items;
    std::size_t n = 0;  // predicate count; every bit vector has this length
    PoolProvenance provenance;
};

// Each bit j drawn independently with P(bit = 1) = s_j. Deterministic per seed.
ItemPool generate_items_selectivity(const ComplexPredicateSpec& spec, std::uint64_t count,
                                    std::uint64_t rng_seed);

// Exactly round(count * in_fraction) IN items; OUT items spread over the
// 2^n - 1 exclusion bit-patterns as evenly as possible (counts differ by at
// most 1). Patterns are enumerated from the pattern with a single failing
// last predicate down to all-failing, and the remainder goes one item per
// pattern from the front of that order. Item order is shuffled by the seed.
ItemPool generate_items_class_distribution(const ComplexPredicateSpec& spec,
                                           const ClassDistributionSpec& dist,
                                           std::uint64_t count, std::uint64_t rng_seed);

// Component j = fraction of items with bit j set.
std::vector<double> empirical_selectivity(const ItemPool& pool);

// CSV with header item_id,p_1,...,p_n,in_label.
void write_pool_csv(const ItemPool& pool, std::ostream& out);
void write_pool_csv(const ItemPool& pool, const std::string& path);

}  // namespace predsim
