#include "aoisched/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "aoisched/fbl.hpp"
#include "aoisched/lambert.hpp"

namespace aoisched {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// W_0 on (-1/e, 0): only needed to mechanize the rejection of the
// principal-branch roots. Halley iteration from w = x.
double lambert_w0_neg(double x) {
  double w = x;
  for (int it = 0; it < 50; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(w))) break;
  }
  return w;
}

// Objective used for integer rounding; the ordering over l does not depend on
// the UE count, so any fixed I >= M works.
double rounding_objective(const ClusterOptInput& in, int l) {
  const double eps = uniform_eps(in, static_cast<double>(l));
  return rr_average_aoi(eps, in.blocklength,
                        static_cast<double>(in.subcarriers) / l, 1.0);
}

}  // namespace

ClusterOptInput ClusterOptInput::from_snr(int subcarriers, int blocklength, double snr,
                                          int payload_bits) {
  const LinkQuality link = LinkQuality::from_snr(snr);
  ClusterOptInput in{subcarriers, blocklength, ln2_scaled(link.capacity),
                     ln2_scaled(payload_bits), link.dispersion};
  in.validate();
  return in;
}

void ClusterOptInput::validate() const {
  if (subcarriers < 1 || blocklength < 1 || !(scaled_capacity > 0.0) ||
      !(scaled_payload > 0.0) || !(dispersion > 0.0) || !(dispersion < 1.0))
    throw std::invalid_argument("ClusterOptInput: all fields must be positive, V in (0,1)");
  if (!(subcarriers * scaled_capacity * blocklength > scaled_payload))
    throw InfeasiblePayloadError(
        "infeasible payload: M*C'*n <= tau', even l=1 cannot carry the packet");
}

double ClusterOptInput::capacity_bound() const {
  return subcarriers * scaled_capacity * blocklength / scaled_payload;
}

double rr_average_aoi(double eps_uni, int n, double alpha, double lambda) {
  if (!(eps_uni >= 0.0) || eps_uni >= 1.0) {
    if (eps_uni == 1.0)
      throw std::invalid_argument("rr_average_aoi: eps = 1, AoI diverges");
    throw std::invalid_argument("rr_average_aoi: eps must lie in [0, 1)");
  }
  if (!(alpha >= 1.0)) throw std::invalid_argument("rr_average_aoi: alpha must be >= 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("rr_average_aoi: lambda must be > 0");
  if (n < 1) throw std::invalid_argument("rr_average_aoi: n must be >= 1");
  return 1.0 / lambda + n * (1.0 + eps_uni) / (2.0 * (1.0 - eps_uni)) * alpha + n - 1.5;
}

double beta_relaxed(const ClusterOptInput& in, double l) {
  if (!(l > 0.0)) throw std::invalid_argument("beta_relaxed: l must be > 0");
  const double m = in.subcarriers;
  const double n = in.blocklength;
  return (m * in.scaled_capacity * n / l - in.scaled_payload) /
         std::sqrt(m * in.dispersion * n / l);
}

double uniform_eps(const ClusterOptInput& in, double l) {
  return q_function(beta_relaxed(in, l));
}

ClusterOptResult optimal_cluster_size(const ClusterOptInput& in) {
  in.validate();
  const double cap = in.scaled_capacity;
  const double pay = in.scaled_payload;
  const double v = in.dispersion;
  const double m = in.subcarriers;
  const double n = in.blocklength;

  // Lambert argument -2*pi*exp(-q) with q = 4*C'*tau'/V, kept in log form.
  const double q = 4.0 * cap * pay / v;
  const double r = q - std::log(kTwoPi);
  if (r < 1.0)
    throw RegimeError("optimal_cluster_size: Lambert argument below -1/e (4*C'*tau' >> V violated)");
  const double w = lambert_w_minus1_neg_exp(r);
  const double u = -w;

  // beta_opt^2 = -w - q = ln(u/(2*pi)); real only when u > q.
  if (!(u > q))
    throw RegimeError("optimal_cluster_size: no positive-margin stationary point (4*C'*tau' too small against V)");
  const double beta_sq = std::log(u / kTwoPi);
  const double beta_opt = std::sqrt(beta_sq);

  const double delta = m * n * (u * v - 2.0 * cap * pay);
  // delta^2 - 4*tau'^2*M^2*C'^2*n^2 factors as (M*n*V)^2 * u * (u - q).
  const double sqrt_disc = m * n * v * std::sqrt(u * (u - q));
  const double l_real = (delta - sqrt_disc) / (2.0 * pay * pay);

  ClusterOptResult res{};
  res.l_real = l_real;
  res.delta = delta;
  res.w = w;
  res.beta_opt = beta_opt;
  res.eps_uni = q_function(beta_opt);
  res.high_per_warning = res.eps_uni > 0.3;

  const int lo = std::clamp(static_cast<int>(std::floor(l_real)), 1, in.subcarriers);
  const int hi = std::clamp(static_cast<int>(std::ceil(l_real)), 1, in.subcarriers);
  res.l_int = (hi != lo && rounding_objective(in, hi) < rounding_objective(in, lo)) ? hi : lo;
  return res;
}

int exhaustive_cluster_search(const ClusterOptInput& in, int ue_count) {
  in.validate();
  if (ue_count < 1) throw std::invalid_argument("exhaustive_cluster_search: ue_count must be >= 1");
  const int l_max = std::min(ue_count, in.subcarriers);
  int best_l = 1;
  double best = std::numeric_limits<double>::infinity();
  for (int l = 1; l <= l_max; ++l) {
    const double eps = uniform_eps(in, static_cast<double>(l));
    if (eps >= 1.0) continue;
    const double obj =
        rr_average_aoi(eps, in.blocklength, static_cast<double>(ue_count) / l, 1.0);
    if (obj < best) {
      best = obj;
      best_l = l;
    }
  }
  return best_l;
}

ClusterRootRejection cluster_root_rejection(const ClusterOptInput& in) {
  in.validate();
  const double cap = in.scaled_capacity;
  const double pay = in.scaled_payload;
  const double v = in.dispersion;
  const double m = in.subcarriers;
  const double n = in.blocklength;
  const double q = 4.0 * cap * pay / v;

  ClusterRootRejection rej{};
  rej.capacity_bound = in.capacity_bound();

  // Principal branch: quadratic tau'^2 l^2 - delta0 l + M^2 C'^2 n^2 with
  // delta0 = -M n (2 C' tau' + w0 V). Its discriminant is (MnV)^2 u0 (u0 - q)
  // with u0 = -w0 in (0, 1), hence negative in the operating regime.
  const double w0 = lambert_w0_neg(-kTwoPi * std::exp(-q));
  const double delta0 = -m * n * (2.0 * cap * pay + w0 * v);
  const double disc0 = delta0 * delta0 - 4.0 * pay * pay * m * m * cap * cap * n * n;
  rej.principal_complex = disc0 < 0.0;
  rej.principal_sum = delta0 / (pay * pay);

  const ClusterOptResult res = optimal_cluster_size(in);
  const double sqrt_disc = res.delta - 2.0 * pay * pay * res.l_real;  // = sqrt(disc)
  rej.minus_branch_large = (res.delta + sqrt_disc) / (2.0 * pay * pay);
  return rej;
}

}  // namespace aoisched
