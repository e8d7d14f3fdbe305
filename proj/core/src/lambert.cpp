#include "aoisched/lambert.hpp"

#include <cmath>
#include <stdexcept>

namespace aoisched {
namespace {

// h - log1p(h) without cancellation for small h.
double h_minus_log1p(double h) {
  if (std::abs(h) > 0.25) return h - std::log1p(h);
  // sum_{k>=2} (-1)^k h^k / k
  double term = h * h / 2.0;
  double sum = term;
  double hk = h * h;
  for (int k = 3; k < 64; ++k) {
    hk *= -h;
    term = hk / k;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

// Solve u - ln(u) = r for u >= 1 given r >= 1, substituting u = 1 + h:
//   f(h) = h - log1p(h) - (r - 1) = 0,  f'(h) = h / (1 + h).
// f is increasing and convex on h > 0, so safeguarded Newton converges from
// any positive start; the initial guess comes from the branch-point series
// (small r) or the log asymptote u ~ r + ln(r) (large r).
double solve_u(double r) {
  const double rm1 = r - 1.0;
  if (rm1 <= 0.0) return 1.0;

  double h;
  if (rm1 < 0.5) {
    const double s = std::sqrt(2.0 * rm1);
    h = s + 2.0 * rm1 / 3.0;
  } else {
    h = rm1 + std::log1p(rm1 + std::log1p(rm1));
  }

  double lo = 0.0;
  double hi = 2.0 * rm1 + 2.0;  // f(hi) >= hi/2 - (r-1) > 0 for hi >= 2(r-1)+2
  for (int it = 0; it < 60; ++it) {
    const double f = h_minus_log1p(h) - rm1;
    if (std::abs(f) <= 1e-15 * (1.0 + rm1)) break;
    if (f > 0.0) hi = h; else lo = h;
    const double fp = h / (1.0 + h);
    double next = (fp > 0.0) ? h - f / fp : 0.5 * (lo + hi);
    if (!(next > lo) || !(next < hi)) next = 0.5 * (lo + hi);  // bisection fallback
    if (std::abs(next - h) <= 1e-16 * (1.0 + std::abs(h))) break;
    h = next;
  }
  return 1.0 + h;
}

}  // namespace

double lambert_w_minus1_neg_exp(double r) {
  if (!(r >= 1.0))
    throw std::domain_error("lambert_w_minus1_neg_exp: requires r >= 1 (argument below -1/e)");
  return -solve_u(r);
}

double lambert_w_minus1(double x) {
  if (!std::isfinite(x) || x >= 0.0 || x < -std::exp(-1.0))
    throw std::domain_error("lambert_w_minus1: argument must lie in [-1/e, 0)");
  // w*e^w = x  <=>  u - ln(u) = -ln(-x) with u = -w >= 1.
  double r = -std::log(-x);
  if (r < 1.0) r = 1.0;  // x rounded just past the branch point
  return -solve_u(r);
}

}  // namespace aoisched
