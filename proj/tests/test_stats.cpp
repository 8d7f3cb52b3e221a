#include <doctest.h>

#include <cmath>

#include "predsim/stats.hpp"

using namespace predsim;

namespace {

GroupedSamples three_groups() {
    GroupedSamples s;
    s.groups = {{"g1", {1.0, 2.0, 3.0}},
                {"g2", {4.0, 5.0, 6.0}},
                {"g3", {7.0, 8.0, 9.0}}};
    return s;
}

void check_rel(double got, double want, double tol) {
    CHECK(std::abs(got - want) <= tol * std::abs(want));
}

}  // namespace

TEST_CASE("kruskal wallis on the rank-sum fixture") {
    // rank sums 6, 15, 24 -> H = 7.2, p = exp(-3.6)
    const auto r = kruskal_wallis(three_groups());
    CHECK(std::abs(r.statistic - 7.2) <= 1e-9);
    CHECK(r.degrees_of_freedom == 2);
    CHECK(std::abs(r.p_value - 0.027323722447292558) <= 1e-9);
}

TEST_CASE("kruskal wallis with ties") {
    GroupedSamples a;
    a.groups = {{"x", {1.0, 2.0, 2.0, 3.0}}, {"y", {2.0, 4.0, 5.0}}};
    const auto ra = kruskal_wallis(a);
    CHECK(std::abs(ra.statistic - 2.1538461538461497) <= 1e-9);
    CHECK(std::abs(ra.p_value - 0.14221324193638876) <= 1e-9);

    GroupedSamples b;
    b.groups = {{"x", {1.2, 3.4, 3.4, 5.6, 7.8}},
                {"y", {2.3, 3.4, 6.7}},
                {"z", {0.1, 3.4, 4.5, 9.9}}};
    const auto rb = kruskal_wallis(b);
    CHECK(std::abs(rb.statistic - 0.03553743961352483) <= 1e-9);
    CHECK(std::abs(rb.p_value - 0.9823882130218362) <= 1e-9);
}

TEST_CASE("kruskal wallis degenerate and error cases") {
    GroupedSamples flat;
    flat.groups = {{"a", {2.0, 2.0}}, {"b", {2.0, 2.0}}};
    const auto r = kruskal_wallis(flat);
    CHECK(r.statistic == doctest::Approx(0.0));
    CHECK(r.p_value == doctest::Approx(1.0));

    GroupedSamples one;
    one.groups = {{"a", {1.0, 2.0, 3.0}}};
    CHECK_THROWS_AS(kruskal_wallis(one), EmptyInput);

    GroupedSamples empty_group;
    empty_group.groups = {{"a", {1.0, 2.0}}, {"b", {}}};
    CHECK_THROWS_AS(kruskal_wallis(empty_group), EmptyInput);
}

TEST_CASE("kruskal wallis is invariant under monotone transforms") {
    const auto base = kruskal_wallis(three_groups());
    for (auto transform : {+[](double x) { return std::exp(x); },
                           +[](double x) { return x * x * x + 5.0; }}) {
        auto s = three_groups();
        for (auto& [label, values] : s.groups)
            for (auto& v : values) v = transform(v);
        const auto r = kruskal_wallis(s);
        CHECK(r.statistic == doctest::Approx(base.statistic).epsilon(1e-14));
        CHECK(r.p_value == doctest::Approx(base.p_value).epsilon(1e-14));
    }
}

TEST_CASE("dunn post hoc on the rank-sum fixture") {
    const auto comparisons = dunn_posthoc(three_groups());
    REQUIRE(comparisons.size() == 3);
    CHECK(comparisons[0].group_a == "g1");
    CHECK(comparisons[0].group_b == "g2");
    CHECK(comparisons[2].group_a == "g2");
    CHECK(comparisons[2].group_b == "g3");

    // z_13 = -6/sqrt(5); two-sided p values against 40-digit references
    CHECK(std::abs(comparisons[1].z - (-2.6832815729997477)) <= 1e-4);
    CHECK(std::abs(comparisons[1].p_raw - 0.0072903580915) <= 1e-9);
    CHECK(std::abs(comparisons[0].z - (-1.3416407864998738)) <= 1e-9);
    CHECK(std::abs(comparisons[0].p_raw - 0.179712494879) <= 1e-9);
}

TEST_CASE("dunn post hoc with ties") {
    GroupedSamples s;
    s.groups = {{"x", {1.2, 3.4, 3.4, 5.6, 7.8}},
                {"y", {2.3, 3.4, 6.7}},
                {"z", {0.1, 3.4, 4.5, 9.9}}};
    const auto c = dunn_posthoc(s);
    REQUIRE(c.size() == 3);
    CHECK(std::abs(c[0].z - 0.16752496389066904) <= 1e-9);
    CHECK(std::abs(c[0].p_raw - 0.8669570067326604) <= 1e-9);
    CHECK(std::abs(c[1].z - (-0.010521812325905707)) <= 1e-9);
    CHECK(std::abs(c[1].p_raw - 0.9916049632941489) <= 1e-9);
    CHECK(std::abs(c[2].z - (-0.16942591737063306)) <= 1e-9);
    CHECK(std::abs(c[2].p_raw - 0.8654616390684116) <= 1e-9);

    // dropping the tie correction changes the variance
    const auto no_tie = dunn_posthoc(s, /*tie_correction=*/false);
    CHECK(std::abs(no_tie[0].z) < std::abs(c[0].z));
}

TEST_CASE("benjamini hochberg adjusted p values") {
    const std::vector<double> ps = {0.01, 0.02, 0.04};
    const auto r = benjamini_hochberg(ps, 0.05);
    REQUIRE(r.size() == 3);
    CHECK(r[0].p_adjusted == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(r[1].p_adjusted == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(r[2].p_adjusted == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(r[0].rejected);
    CHECK(r[1].rejected);
    CHECK(r[2].rejected);
}

TEST_CASE("benjamini hochberg step-up on a mixed case") {
    const std::vector<double> ps = {0.005, 0.049, 0.05, 0.2};
    const auto r = benjamini_hochberg(ps, 0.05);
    REQUIRE(r.size() == 4);
    CHECK(r[0].p_adjusted == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(r[1].p_adjusted == doctest::Approx(0.06666666666666667).epsilon(1e-12));
    CHECK(r[2].p_adjusted == doctest::Approx(0.06666666666666667).epsilon(1e-12));
    CHECK(r[3].p_adjusted == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(r[0].rejected);
    CHECK_FALSE(r[1].rejected);
    CHECK_FALSE(r[2].rejected);
    CHECK_FALSE(r[3].rejected);
}

TEST_CASE("benjamini hochberg preserves input order") {
    const std::vector<double> ps = {0.04, 0.01, 0.02};
    const auto r = benjamini_hochberg(ps, 0.05);
    CHECK(r[0].p_adjusted == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(r[1].p_adjusted == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(r[2].p_adjusted == doctest::Approx(0.03).epsilon(1e-12));
}

TEST_CASE("benjamini hochberg rejects bad inputs") {
    const std::vector<double> ps = {0.01};
    CHECK_THROWS_AS(benjamini_hochberg(ps, 0.0), DomainError);
    CHECK_THROWS_AS(benjamini_hochberg(ps, 1.0), DomainError);
    const std::vector<double> bad = {0.01, 1.2};
    CHECK_THROWS_AS(benjamini_hochberg(bad, 0.05), DomainError);
}

TEST_CASE("dunn rejects the fixtures kruskal wallis rejects") {
    GroupedSamples one;
    one.groups = {{"a", {1.0, 2.0}}};
    CHECK_THROWS_AS(dunn_posthoc(one), EmptyInput);
}
