#include "predsim/numerics.hpp"

#include <cmath>
#include <limits>

#include "predsim/errors.hpp"

namespace predsim {

namespace {

constexpr double kEps = 1e-15;
constexpr int kMaxIter = 500;
constexpr double kTiny = 1e-300;

// Lower regularized gamma P(a,x) by power series, for x < a+1.
double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    double ap = a;
    for (int i = 0; i < kMaxIter; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized gamma Q(a,x) by Lentz continued fraction, for x >= a+1.
double gamma_q_contfrac(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kEps) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0)) throw DomainError("gamma shape a must be > 0");
    if (x < 0.0) throw DomainError("gamma argument x must be >= 0");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
    return gamma_q_contfrac(a, x);
}

double chi_squared_upper_tail(double x, int df) {
    if (df < 1) throw DomainError("degrees of freedom must be >= 1");
    if (x < 0.0) throw DomainError("chi-squared statistic must be >= 0");
    return regularized_gamma_q(0.5 * df, 0.5 * x);
}

double normal_upper_tail(double z) {
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

}  // namespace predsim
