#pragma once

// Special functions backing the nonparametric tests.

namespace predsim {

// Regularized upper incomplete gamma Q(a, x) = Gamma(a,x)/Gamma(a), a > 0,
// x >= 0. Series expansion for x < a+1, continued fraction otherwise;
// converged to ~1e-15 relative.
double regularized_gamma_q(double a, double x);

// Upper tail of the chi-squared distribution with df degrees of freedom,
// P(X >= x) = Q(df/2, x/2). For df = 2 this is exactly exp(-x/2).
double chi_squared_upper_tail(double x, int df);

// Standard normal upper tail P(Z > z) = Phi(-z) for any real z.
double normal_upper_tail(double z);

}  // namespace predsim
