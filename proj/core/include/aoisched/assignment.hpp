#pragma once

// Intra-cluster sub-carrier assignment: the random uniform blind allocator,
// the CSI-driven recursive re-assignment loop, and a brute-force composition
// oracle used to verify that uniform allocation minimizes the expected
// PER sum under i.i.d. gains.

#include <cstdint>
#include <span>
#include <vector>

#include "aoisched/fbl.hpp"

namespace aoisched {

class Rng;

// Which cluster member owns each sub-carrier. Storing the owner index makes
// "every carrier has exactly one owner" hold by construction; the count
// vector is kept consistent alongside.
class AssignmentMatrix {
 public:
  AssignmentMatrix(std::vector<int> owner, int cluster_size);

  int subcarriers() const { return static_cast<int>(owner_.size()); }
  int cluster_size() const { return cluster_size_; }
  int owner_of(int m) const { return owner_[static_cast<std::size_t>(m)]; }
  bool assigned(int m, int i) const { return owner_of(m) == i; }
  const std::vector<int>& per_ue_counts() const { return counts_; }
  const std::vector<int>& owners() const { return owner_; }

  void move_carrier(int m, int to);

 private:
  std::vector<int> owner_;
  std::vector<int> counts_;
  int cluster_size_;
};

// SNR of carrier m as seen by cluster member i, row-major M x l.
struct SnrTable {
  std::vector<double> values;
  int subcarriers = 0;
  int cluster_size = 0;

  double operator()(int m, int i) const {
    return values[static_cast<std::size_t>(m) * cluster_size + i];
  }
  double& operator()(int m, int i) {
    return values[static_cast<std::size_t>(m) * cluster_size + i];
  }
  static SnrTable zeros(int subcarriers, int cluster_size);
};

// floor(M/l) carriers each, one extra for (M mod l) UEs drawn uniformly, and
// a uniformly random carrier-to-UE mapping (no index preference).
AssignmentMatrix uniform_blind_assign(int subcarriers, int cluster_size, Rng& rng);

// Advisory capacity check for a blind assignment: which UEs would fall short
// of the payload even at the average gain (b_i * C(mean_gain) * n < tau).
// The blind allocator has no CSI to repair this, so it is reported, not fixed.
std::vector<int> capacity_shortfall(const AssignmentMatrix& assignment,
                                    double mean_gain, int n, int tau);

struct RecursiveAssignResult {
  AssignmentMatrix assignment;
  int iterations = 0;           // accepted moves
  double initial_sum_eps = 0.0;
  double final_sum_eps = 0.0;
};

// Iteratively moves the lowest-SNR carrier of the best-PER UE to the
// worst-PER UE while the PER sum strictly improves. A move that would strip
// the best UE of its last carrier stops the loop instead.
RecursiveAssignResult recursive_assign(const SnrTable& snr, int n, int tau,
                                       AssignmentMatrix init);

// Brute-force search over all compositions of M into l positive parts,
// scoring each by the sum of expected PERs estimated with common random
// numbers. Bounded to M <= 12, l <= 4.
struct PartitionScanEntry {
  std::vector<int> counts;
  double mean_objective = 0.0;
  // Paired statistics of (objective - objective(uniform)) per sample.
  double diff_vs_uniform = 0.0;
  double diff_se = 0.0;
};

struct PartitionScan {
  std::vector<PartitionScanEntry> entries;
  std::size_t best_index = 0;
  std::size_t uniform_index = 0;
};

PartitionScan brute_force_partition_scan(int subcarriers, int cluster_size,
                                         const GainDistribution& dist, int n, int tau,
                                         std::uint64_t samples, std::uint64_t seed);

std::vector<int> brute_force_partition_oracle(int subcarriers, int cluster_size,
                                              const GainDistribution& dist, int n, int tau,
                                              std::uint64_t samples, std::uint64_t seed);

}  // namespace aoisched
