#pragma once

// Cluster-size selection from minimal knowledge: the closed-form relaxed
// optimum (Lambert W branch -1 route), integer rounding against the
// round-robin average-AoI objective, and an exhaustive integer-search oracle
// over the same objective.

#include <stdexcept>

namespace aoisched {

struct InfeasiblePayloadError : std::domain_error {
  using std::domain_error::domain_error;
};
// The analysis regime (capacity * payload large against dispersion) does not
// hold; the Lambert argument leaves [-1/e, 0) or the stationary point has no
// real positive-margin solution.
struct RegimeError : std::domain_error {
  using std::domain_error::domain_error;
};

// Homogeneous frequency-flat system seen by the blind optimizer.
struct ClusterOptInput {
  int subcarriers;         // M
  int blocklength;         // n, symbols per slot
  double scaled_capacity;  // C' = log2(1+snr) * ln2
  double scaled_payload;   // tau' = tau * ln2
  double dispersion;       // V = 1 - 1/(1+snr)^2

  static ClusterOptInput from_snr(int subcarriers, int blocklength, double snr,
                                  int payload_bits);
  void validate() const;
  // Upper bound l < M*C'*n/tau' for a positive error margin.
  double capacity_bound() const;
};

struct ClusterOptResult {
  double l_real;    // relaxed optimum
  int l_int;        // better of floor/ceil under the RR AoI objective, in [1, M]
  double delta;
  double w;         // Lambert W_{-1} value
  double beta_opt;  // error-margin argument at l_real; predicted eps = Q(beta_opt)
  double eps_uni;
  bool high_per_warning;  // eps_uni > 0.3: the eps^2 ~ 0 derivation is strained
};

// Infinite-horizon average AoI of one UE under clustered round-robin:
//   1/lambda + n*(1+eps)/(2*(1-eps)) * alpha + n - 3/2,   alpha = I/l.
// eps_uni == 1 diverges and throws.
double rr_average_aoi(double eps_uni, int n, double alpha, double lambda);

// Error-margin argument and PER under uniform allocation with relaxed
// (real-valued) per-UE carrier count b = M/l.
double beta_relaxed(const ClusterOptInput& in, double l);
double uniform_eps(const ClusterOptInput& in, double l);

ClusterOptResult optimal_cluster_size(const ClusterOptInput& in);

// Integer argmin of the RR AoI objective over l in [1, min(I, M)], with
// eps from the relaxed uniform allocation. Ties go to the smaller l.
int exhaustive_cluster_search(const ClusterOptInput& in, int ue_count);

// The three rejected stationary-point candidates, mechanized so tests can
// assert why each one is discarded.
struct ClusterRootRejection {
  bool principal_complex;        // principal-branch quadratic has no real root
  double principal_sum;          // sum of the principal pair (real part * 2)
  double minus_branch_large;     // the +sqrt root of the branch -1 quadratic
  double capacity_bound;         // M*C'*n/tau'
};
ClusterRootRejection cluster_root_rejection(const ClusterOptInput& in);

}  // namespace aoisched
