#include "predsim/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <random>

#include "predsim/rng.hpp"

namespace predsim {

namespace {

std::string item_id(std::uint64_t index) { return "i" + std::to_string(index); }

void check_spec(const ComplexPredicateSpec& spec) {
    if (spec.predicates.empty())
        throw EmptyInput("complex predicate needs at least one predicate");
}

}  // namespace

ItemPool generate_items_selectivity(const ComplexPredicateSpec& spec, std::uint64_t count,
                                    std::uint64_t rng_seed) {
    check_spec(spec);
    if (count < 1) throw DomainError("item count must be >= 1");

    const std::size_t n = spec.size();
    auto rng = make_stream(rng_seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    ItemPool pool;
    pool.n = n;
    pool.provenance = {"selectivity", rng_seed};
    pool.items.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        ItemTruth item;
        item.item_id = item_id(i);
        item.bits.resize(n);
        for (std::size_t j = 0; j < n; ++j)
            item.bits[j] = unit(rng) < spec.predicates[j].selectivity ? 1 : 0;
        pool.items.push_back(std::move(item));
    }
    return pool;
}

ItemPool generate_items_class_distribution(const ComplexPredicateSpec& spec,
                                           const ClassDistributionSpec& dist,
                                           std::uint64_t count, std::uint64_t rng_seed) {
    check_spec(spec);
    if (count < 1) throw DomainError("cannot split zero items across exclusion patterns");
    if (!(dist.in_fraction > 0.0 && dist.in_fraction < 1.0))
        throw DomainError("in_fraction must lie in (0,1)");

    const std::size_t n = spec.size();
    const auto in_count =
        static_cast<std::uint64_t>(std::llround(static_cast<double>(count) * dist.in_fraction));
    const std::uint64_t out_count = count - in_count;
    const std::uint64_t pattern_count = (std::uint64_t{1} << n) - 1;

    ItemPool pool;
    pool.n = n;
    pool.provenance = {"class_distribution", rng_seed};
    pool.items.reserve(count);

    for (std::uint64_t i = 0; i < in_count; ++i)
        pool.items.push_back({item_id(pool.items.size()),
                              std::vector<std::uint8_t>(n, std::uint8_t{1})});

    // Exclusion patterns in canonical order: bit values 2^n - 2 down to 0,
    // with bit 0 of the value being the last predicate. The first patterns in
    // this order absorb the remainder of the equal split.
    const std::uint64_t base = out_count / pattern_count;
    const std::uint64_t remainder = out_count % pattern_count;
    for (std::uint64_t k = 0; k < pattern_count; ++k) {
        const std::uint64_t value = pattern_count - 1 - k;
        const std::uint64_t pattern_items = base + (k < remainder ? 1 : 0);
        std::vector<std::uint8_t> bits(n);
        for (std::size_t j = 0; j < n; ++j)
            bits[j] = (value >> (n - 1 - j)) & 1 ? 1 : 0;
        for (std::uint64_t i = 0; i < pattern_items; ++i)
            pool.items.push_back({item_id(pool.items.size()), bits});
    }

    auto rng = make_stream(mix_seed(rng_seed, 0x73687566ULL /* "shuf" */));
    std::shuffle(pool.items.begin(), pool.items.end(), rng);
    return pool;
}

std::vector<double> empirical_selectivity(const ItemPool& pool) {
    if (pool.items.empty()) throw EmptyInput("empty item pool");
    std::vector<double> fractions(pool.n, 0.0);
    for (const auto& item : pool.items)
        for (std::size_t j = 0; j < pool.n; ++j)
            if (item.bits[j]) fractions[j] += 1.0;
    for (auto& f : fractions) f /= static_cast<double>(pool.items.size());
    return fractions;
}

void write_pool_csv(const ItemPool& pool, std::ostream& out) {
    out << "item_id";
    for (std::size_t j = 1; j <= pool.n; ++j) out << ",p_" << j;
    out << ",in_label\n";
    for (const auto& item : pool.items) {
        out << item.item_id;
        for (auto b : item.bits) out << ',' << int(b);
        out << ',' << (item.in_label() ? 1 : 0) << '\n';
    }
}

void write_pool_csv(const ItemPool& pool, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path);
    write_pool_csv(pool, out);
    if (!out) throw IoError("failed writing: " + path);
}

}  // namespace predsim
