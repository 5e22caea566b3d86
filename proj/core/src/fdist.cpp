#include "paneldiag/fdist.hpp"

#include <cmath>
#include <string>

#include "paneldiag/errors.hpp"

namespace paneldiag {

namespace {

constexpr const char* kModule = "influence";

// Lentz's modified continued fraction for the incomplete beta. Converges in a
// handful of iterations when x < (a + 1) / (a + b + 2).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIter = 500;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) return h;
  }
  throw NumericalError(kModule, "incomplete beta continued fraction failed to "
                                "converge for a=" + std::to_string(a) +
                                " b=" + std::to_string(b));
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0))
    throw ValidationError(kModule, "incomplete beta requires a > 0 and b > 0");
  if (!(x >= 0.0) || !(x <= 1.0))
    throw ValidationError(kModule, "incomplete beta requires x in [0, 1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;

  const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                           std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0))
    return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double f_cdf(double x, double nu1, double nu2) {
  if (!(nu1 > 0.0) || !(nu2 > 0.0))
    throw ValidationError(kModule, "F distribution requires positive degrees "
                                   "of freedom");
  if (x <= 0.0) return 0.0;
  const double z = nu1 * x / (nu1 * x + nu2);
  return regularized_incomplete_beta(0.5 * nu1, 0.5 * nu2, z);
}

double f_median_cutoff(int nu1, int nu2) {
  if (nu1 < 1 || nu2 < 1)
    throw ValidationError(kModule, "F median requires nu1 >= 1 and nu2 >= 1");
  const double a = static_cast<double>(nu1);
  const double b = static_cast<double>(nu2);

  double lo = 0.0;
  double hi = 1.0;
  while (f_cdf(hi, a, b) < 0.5) hi *= 2.0;  // CDF tends to 1, so this ends
  for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (f_cdf(mid, a, b) < 0.5)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace paneldiag
