#pragma once

// Per-slot UE selection: clustered round-robin (the blind optimum), the
// AoI-index heuristic, a random baseline, and the URLLC-targeted cluster
// sizing rule used as a benchmark.

#include <span>
#include <string>
#include <vector>

#include "aoisched/cluster.hpp"

namespace aoisched {

class Rng;

enum class Policy { ClusteredRR, AoiIndex, Random, NoClustering, UrllcBaseline };

std::string to_string(Policy p);
Policy parse_policy(const std::string& s);

struct SchedulerState {
  Policy policy = Policy::ClusteredRR;
  int cluster_size = 1;  // l
  int rr_cursor = 0;     // next UE in the fixed rotation
};

// {cursor, cursor+1, ..., cursor+l-1} mod I; the window slides by l each
// slot, so clusters may straddle the list boundary when l does not divide I.
std::vector<int> next_cluster_rr(SchedulerState& state, int ue_count);

struct AoiIndexInputs {
  std::span<const double> aoi;      // h_i in symbols
  std::span<const double> est_per;  // per-UE eps estimate from RSSI-level SNR
};

// The l UEs with the largest index h*(h+1)*(1-eps); ties to the lowest id.
std::vector<int> next_cluster_aoi_index(const AoiIndexInputs& in, int cluster_size);

std::vector<int> next_cluster_random(Rng& rng, int ue_count, int cluster_size);

struct UrllcSizing {
  int cluster_size = 1;
  bool feasible = false;   // both targets met
  double eps = 0.0;        // predicted PER at the chosen l
  double revisit_s = 0.0;  // RR revisit interval at the chosen l
};

// Largest l whose uniform allocation meets the PER target while the revisit
// interval ceil(I/l)*slot_duration stays within the delay budget. When no l
// satisfies both, returns the l with the smallest normalized constraint
// violation (larger l on ties) and feasible = false.
UrllcSizing urllc_cluster_size(const ClusterOptInput& in, int ue_count,
                               double slot_duration_s, double max_delay_s,
                               double target_per);

}  // namespace aoisched
