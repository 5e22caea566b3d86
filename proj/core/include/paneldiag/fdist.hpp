#pragma once

namespace paneldiag {

// Regularized incomplete beta I_x(a, b), evaluated by Lentz's continued
// fraction with the standard symmetry switch for fast convergence. Accurate to
// ~1e-14 for the degree-of-freedom ranges used here.
double regularized_incomplete_beta(double a, double b, double x);

// P(F <= x) for an F(nu1, nu2) variate.
double f_cdf(double x, double nu1, double nu2);

// Median of the F(nu1, nu2) distribution, inverted from the CDF by bisection
// to absolute tolerance 1e-12. Used as the joint-influence cutoff.
double f_median_cutoff(int nu1, int nu2);

}  // namespace paneldiag
