#pragma once

// Lambert W, branch -1: the solution w <= -1 of w * exp(w) = x for
// x in [-1/e, 0). The cluster-size optimizer needs this branch only.

namespace aoisched {

// Throws std::domain_error for x outside [-1/e, 0).
// Residual |w*exp(w) - x| <= 1e-12 * max(|x|, 1e-300).
double lambert_w_minus1(double x);

// W_{-1}(-exp(-r)) for r >= 1, evaluated without forming exp(-r).
// This is the form the cluster-size solver uses; it stays accurate when r is
// large enough that -exp(-r) would underflow to zero.
// Throws std::domain_error for r < 1.
double lambert_w_minus1_neg_exp(double r);

}  // namespace aoisched
