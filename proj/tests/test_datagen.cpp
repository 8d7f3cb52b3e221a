#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "predsim/datagen.hpp"

using namespace predsim;

namespace {

ComplexPredicateSpec two_predicates(double s1, double s2) {
    ComplexPredicateSpec cp;
    cp.predicates = {{"p1", s1, 0.7, 0.04}, {"p2", s2, 0.7, 0.04}};
    return cp;
}

std::map<std::string, std::size_t> pattern_counts(const ItemPool& pool) {
    std::map<std::string, std::size_t> counts;
    for (const auto& item : pool.items) {
        std::string key;
        for (auto b : item.bits) key += b ? '1' : '0';
        ++counts[key];
    }
    return counts;
}

}  // namespace

TEST_CASE("selectivity generation matches requested marginals") {
    const auto cp = two_predicates(0.3, 0.7);
    const auto pool = generate_items_selectivity(cp, 50000, 7);
    REQUIRE(pool.items.size() == 50000);
    REQUIRE(pool.n == 2);
    const auto emp = empirical_selectivity(pool);
    // 3 sigma for a Bernoulli mean over 50000 draws is under 0.007
    CHECK(std::abs(emp[0] - 0.3) < 0.01);
    CHECK(std::abs(emp[1] - 0.7) < 0.01);
}

TEST_CASE("selectivity generation is deterministic per seed") {
    const auto cp = two_predicates(0.5, 0.5);
    const auto a = generate_items_selectivity(cp, 200, 11);
    const auto b = generate_items_selectivity(cp, 200, 11);
    const auto c = generate_items_selectivity(cp, 200, 12);
    REQUIRE(a.items.size() == b.items.size());
    bool same_ab = true, same_ac = true;
    for (std::size_t i = 0; i < a.items.size(); ++i) {
        same_ab = same_ab && a.items[i].bits == b.items[i].bits;
        same_ac = same_ac && a.items[i].bits == c.items[i].bits;
    }
    CHECK(same_ab);
    CHECK_FALSE(same_ac);
}

TEST_CASE("class distribution hits exact counts") {
    const auto cp = two_predicates(0.5, 0.5);
    const auto pool = generate_items_class_distribution(cp, ClassDistributionSpec{0.4},
                                                        100, 3);
    REQUIRE(pool.items.size() == 100);
    const auto counts = pattern_counts(pool);
    CHECK(counts.at("11") == 40);
    CHECK(counts.at("10") == 20);
    CHECK(counts.at("01") == 20);
    CHECK(counts.at("00") == 20);
}

TEST_CASE("class distribution spreads the remainder from the front") {
    // 100 items at 20% IN: 80 OUT over {10, 01, 00} -> 27, 27, 26
    const auto cp = two_predicates(0.5, 0.5);
    const auto pool = generate_items_class_distribution(cp, ClassDistributionSpec{0.2},
                                                        100, 3);
    const auto counts = pattern_counts(pool);
    CHECK(counts.at("11") == 20);
    CHECK(counts.at("10") == 27);
    CHECK(counts.at("01") == 27);
    CHECK(counts.at("00") == 26);
}

TEST_CASE("class distribution with three predicates") {
    ComplexPredicateSpec cp;
    cp.predicates = {{"p1", 0.5, 0.7, 0.04},
                     {"p2", 0.5, 0.7, 0.04},
                     {"p3", 0.5, 0.7, 0.04}};
    const auto pool = generate_items_class_distribution(cp, ClassDistributionSpec{0.5},
                                                        10, 5);
    const auto counts = pattern_counts(pool);
    CHECK(counts.at("111") == 5);
    // 5 OUT items over 7 patterns, remainder filled from the
    // highest-bit-value pattern downward
    CHECK(counts.at("110") == 1);
    CHECK(counts.at("101") == 1);
    CHECK(counts.at("100") == 1);
    CHECK(counts.at("011") == 1);
    CHECK(counts.at("010") == 1);
    CHECK(counts.count("001") == 0);
    CHECK(counts.count("000") == 0);
}

TEST_CASE("class distribution shuffles deterministically") {
    const auto cp = two_predicates(0.5, 0.5);
    const auto a = generate_items_class_distribution(cp, ClassDistributionSpec{0.4}, 100, 3);
    const auto b = generate_items_class_distribution(cp, ClassDistributionSpec{0.4}, 100, 3);
    const auto c = generate_items_class_distribution(cp, ClassDistributionSpec{0.4}, 100, 4);
    bool same_ab = true, same_ac = true;
    for (std::size_t i = 0; i < a.items.size(); ++i) {
        same_ab = same_ab && a.items[i].bits == b.items[i].bits;
        same_ac = same_ac && a.items[i].bits == c.items[i].bits;
    }
    CHECK(same_ab);
    CHECK_FALSE(same_ac);

    std::set<std::string> ids;
    for (const auto& item : a.items) ids.insert(item.item_id);
    CHECK(ids.size() == a.items.size());
}

TEST_CASE("empirical selectivity rejects empty pools") {
    ItemPool pool;
    CHECK_THROWS_AS(empirical_selectivity(pool), EmptyInput);
}

TEST_CASE("pool csv schema") {
    const auto cp = two_predicates(0.5, 0.5);
    auto pool = generate_items_class_distribution(cp, ClassDistributionSpec{0.4}, 5, 3);
    std::ostringstream out;
    write_pool_csv(pool, out);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "item_id,p_1,p_2,in_label");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 5);
}
