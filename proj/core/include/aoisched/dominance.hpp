#pragma once

// Verification lab for the round-robin optimality argument: deterministic
// schedules, inter-transmission-interval (ITI) state, the induced probability
// measure over attempt ages, second-order stochastic dominance checks, the
// transmission slot-exchange operation, and exhaustive enumeration of small
// schedule spaces.
//
// Indexing convention: a history built from T slots and unit initial AoI
// carries interval mass T + 1 per UE (the initial interval counts as 1), which
// is the state the analysis denotes with index t = T + 1.

#include <optional>
#include <span>
#include <vector>

namespace aoisched::dominance {

// slot -> transmitting cluster; every slot must hold the same number of
// distinct UE ids.
using Schedule = std::vector<std::vector<int>>;

struct ITIHistory {
  std::vector<std::vector<long>> intervals;  // per UE, oldest first
  std::vector<long> initial;                 // initial AoI per UE (1 = zero state)
  int ue_count = 0;
  long slots = 0;  // T

  long attempts(int i) const {
    return static_cast<long>(intervals[static_cast<std::size_t>(i)].size()) - 1;
  }
  // Interval count k(i); sum of row i equals slots + initial[i].
  long k(int i) const {
    return static_cast<long>(intervals[static_cast<std::size_t>(i)].size());
  }
  void check_conservation() const;  // throws on violation
};

// Builds the ITI state from the first t slots of the schedule. An empty
// `initial` means unit initial AoI for every UE.
ITIHistory iti_from_schedule(const Schedule& schedule, int ue_count, long t,
                             std::span<const long> initial = {});

struct StochasticMeasure {
  std::vector<double> pmf;           // age weight s_kappa, kappa = 0..K-1
  std::vector<double> cdf;           // running pmf sums
  std::vector<double> second_order;  // running cdf sums
  double mass_per_ue = 0.0;          // total interval mass / I (the state index t)

  double mean() const;
  // Second-order running sum extended past K-1 (the cdf saturates at 1).
  double second_order_at(long kappa) const;
};

StochasticMeasure measure_from_iti(const ITIHistory& history);

// Expected average AoI at the history's horizon for homogeneous PER eps:
// direct interval form and the measure form; the two agree to 1e-12.
double expected_avg_aoi(const ITIHistory& history, double eps);
double expected_avg_aoi_via_measure(const ITIHistory& history, double eps);

// Contribution of the initial AoI surplus (initial - 1) to expected_avg_aoi;
// decays like eps^(attempts) and vanishes on the long horizon.
double initial_state_term(const ITIHistory& history, double eps);

struct ExchangeTuple {
  int x = 0;
  int y = 0;
  long kappa = 0;
  long kappa_prime = 0;
  long kappa_dprime = 0;
};

struct ExchangeResult {
  Schedule schedule;
  long tau1 = 0;  // 1-based slot moved from x to y
  long tau2 = 0;  // 1-based slot moved from y to x
};

// The 4-step slot-exchange: x gives up its (k_x - kappa)-th attempt at tau1
// to y, and takes over y's (k_y - kappa)-th attempt at tau2. The supplied
// kappa_prime / kappa_dprime must match the derived values and form one of
// the admissible patterns (kappa' < kappa < kappa'' or the equality variant
// kappa'' = kappa = kappa' + 1); anything else throws std::invalid_argument.
ExchangeResult slot_exchange(const Schedule& schedule, const ExchangeTuple& tuple);

// Derives (kappa_prime, kappa_dprime, tau1, tau2) for a candidate (x, y,
// kappa); nullopt when no valid exchange exists.
std::optional<ExchangeTuple> derive_exchange_tuple(const Schedule& schedule, int x,
                                                   int y, long kappa);

struct RrOptimalityReport {
  bool pass = false;
  long schedules_checked = 0;
  // Worst margins over all schedules (negative values would be violations).
  double worst_aoi_margin = 0.0;        // min over (pi, eps) of aoi(pi) - aoi(RR)
  double worst_dominance_margin = 0.0;  // min over (pi, kappa) of SO(pi) - SO(RR)
  std::vector<double> rr_aoi;           // per eps value
  std::vector<double> min_aoi;          // per eps value, over all schedules
};

// Enumerates every l-clustered schedule of length T from the zero initial
// state and checks that clustered round-robin attains the minimum expected
// average AoI at every eps and is second-order dominant everywhere.
// Enumeration is bounded by C(I,l)^T <= 10^7.
RrOptimalityReport verify_rr_optimality(int ue_count, int cluster_size, int slots,
                                        std::span<const double> eps_grid,
                                        int parallelism = 0);

// Canonical clustered round-robin schedule (window sliding by l).
Schedule rr_schedule(int ue_count, int cluster_size, int slots, int start = 0);

}  // namespace aoisched::dominance
