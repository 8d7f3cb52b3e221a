#include <doctest.h>

#include <cmath>
#include <initializer_list>

#include "predsim/errors.hpp"
#include "predsim/numerics.hpp"

using namespace predsim;

namespace {

void check_rel(double got, double want, double tol) {
    CHECK(std::abs(got - want) <= tol * std::abs(want));
}

}  // namespace

TEST_CASE("chi-squared tail closed form at df = 2") {
    // Q(1, x/2) = exp(-x/2)
    for (double x : {0.1, 0.5, 1.0, 3.6, 7.2, 15.0, 40.0})
        check_rel(chi_squared_upper_tail(x, 2), std::exp(-x / 2.0), 1e-10);
}

TEST_CASE("chi-squared tail reference table") {
    // Reference values computed with 40-digit arithmetic; covers both the
    // series branch (x < a+1) and the continued-fraction branch.
    check_rel(chi_squared_upper_tail(3.841458820694124, 1), 0.05, 1e-12);
    check_rel(chi_squared_upper_tail(7.814727903251179, 3), 0.05, 1e-12);
    check_rel(chi_squared_upper_tail(1.0, 4), 0.90979598956895014, 1e-12);
    check_rel(chi_squared_upper_tail(13.276704135987622, 4), 0.01, 1e-12);
    check_rel(chi_squared_upper_tail(2.1, 7), 0.95409870630844188, 1e-12);
    check_rel(chi_squared_upper_tail(30.0, 7), 9.4959725081341838e-5, 1e-12);
    check_rel(chi_squared_upper_tail(3.0, 10), 0.98142406377785933, 1e-12);
}

TEST_CASE("chi-squared tail edge cases") {
    CHECK(chi_squared_upper_tail(0.0, 3) == doctest::Approx(1.0));
    CHECK(chi_squared_upper_tail(1e4, 2) <= 1e-300);
    CHECK_THROWS_AS(chi_squared_upper_tail(-1.0, 2), DomainError);
    CHECK_THROWS_AS(chi_squared_upper_tail(1.0, 0), DomainError);
}

TEST_CASE("regularized gamma Q basic identities") {
    // Q(1, x) = exp(-x)
    for (double x : {0.01, 0.3, 1.0, 2.5, 10.0})
        check_rel(regularized_gamma_q(1.0, x), std::exp(-x), 1e-12);
    CHECK(regularized_gamma_q(2.5, 0.0) == doctest::Approx(1.0));
    // complement sanity: P + Q = 1 via the df=4 closed form (1 + x)e^-x
    for (double x : {0.2, 1.0, 4.0})
        check_rel(regularized_gamma_q(2.0, x), (1.0 + x) * std::exp(-x), 1e-12);
}

TEST_CASE("normal upper tail reference table") {
    CHECK(normal_upper_tail(0.0) == doctest::Approx(0.5).epsilon(1e-14));
    check_rel(normal_upper_tail(1.0), 0.15865525393145705, 1e-12);
    check_rel(normal_upper_tail(1.96), 0.024997895148220436, 1e-12);
    check_rel(normal_upper_tail(2.683281572999748), 0.0036451790457678154, 1e-12);
    check_rel(normal_upper_tail(5.0), 2.8665157187919391e-7, 1e-12);
    check_rel(normal_upper_tail(-1.5), 0.93319279873114193, 1e-12);
}

TEST_CASE("normal tail symmetry") {
    for (double z : {0.3, 1.1, 2.7})
        CHECK(normal_upper_tail(z) + normal_upper_tail(-z) ==
              doctest::Approx(1.0).epsilon(1e-14));
}
