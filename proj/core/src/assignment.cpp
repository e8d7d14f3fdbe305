#include "aoisched/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "aoisched/rng.hpp"

namespace aoisched {

AssignmentMatrix::AssignmentMatrix(std::vector<int> owner, int cluster_size)
    : owner_(std::move(owner)), cluster_size_(cluster_size) {
  if (cluster_size_ < 1)
    throw std::invalid_argument("AssignmentMatrix: cluster size must be >= 1");
  counts_.assign(static_cast<std::size_t>(cluster_size_), 0);
  for (int o : owner_) {
    if (o < 0 || o >= cluster_size_)
      throw std::invalid_argument("AssignmentMatrix: owner index out of range");
    ++counts_[static_cast<std::size_t>(o)];
  }
}

void AssignmentMatrix::move_carrier(int m, int to) {
  if (to < 0 || to >= cluster_size_)
    throw std::invalid_argument("AssignmentMatrix: target UE out of range");
  int& o = owner_[static_cast<std::size_t>(m)];
  --counts_[static_cast<std::size_t>(o)];
  o = to;
  ++counts_[static_cast<std::size_t>(to)];
}

SnrTable SnrTable::zeros(int subcarriers, int cluster_size) {
  SnrTable t;
  t.subcarriers = subcarriers;
  t.cluster_size = cluster_size;
  t.values.assign(static_cast<std::size_t>(subcarriers) * cluster_size, 0.0);
  return t;
}

AssignmentMatrix uniform_blind_assign(int subcarriers, int cluster_size, Rng& rng) {
  if (cluster_size < 1 || subcarriers < cluster_size)
    throw std::invalid_argument("uniform_blind_assign: need 1 <= l <= M");

  const int base = subcarriers / cluster_size;
  const int extra = subcarriers % cluster_size;

  // Pick the (M mod l) UEs that get one extra carrier: partial Fisher-Yates.
  std::vector<int> ues(static_cast<std::size_t>(cluster_size));
  std::iota(ues.begin(), ues.end(), 0);
  for (int j = 0; j < extra; ++j) {
    const int k = j + static_cast<int>(rng.uniform_below(
                          static_cast<std::uint64_t>(cluster_size - j)));
    std::swap(ues[static_cast<std::size_t>(j)], ues[static_cast<std::size_t>(k)]);
  }
  std::vector<int> counts(static_cast<std::size_t>(cluster_size), base);
  for (int j = 0; j < extra; ++j) ++counts[static_cast<std::size_t>(ues[static_cast<std::size_t>(j)])];

  // Shuffle the carrier indices and deal them out according to the counts.
  std::vector<int> carriers(static_cast<std::size_t>(subcarriers));
  std::iota(carriers.begin(), carriers.end(), 0);
  for (int j = subcarriers - 1; j > 0; --j) {
    const int k = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(j + 1)));
    std::swap(carriers[static_cast<std::size_t>(j)], carriers[static_cast<std::size_t>(k)]);
  }

  std::vector<int> owner(static_cast<std::size_t>(subcarriers), 0);
  std::size_t pos = 0;
  for (int i = 0; i < cluster_size; ++i)
    for (int c = 0; c < counts[static_cast<std::size_t>(i)]; ++c)
      owner[static_cast<std::size_t>(carriers[pos++])] = i;
  return AssignmentMatrix(std::move(owner), cluster_size);
}

std::vector<int> capacity_shortfall(const AssignmentMatrix& assignment,
                                    double mean_gain, int n, int tau) {
  const double per_carrier_bits = LinkQuality::from_snr(mean_gain).capacity * n;
  std::vector<int> lacking;
  const auto& counts = assignment.per_ue_counts();
  for (int i = 0; i < assignment.cluster_size(); ++i)
    if (counts[static_cast<std::size_t>(i)] * per_carrier_bits < tau)
      lacking.push_back(i);
  return lacking;
}

namespace {

struct UeSums {
  double cap_bits = 0.0;  // sum of C_m over owned carriers
  double disp = 0.0;      // sum of V_m
};

double eps_from_sums(const UeSums& s, int n, int tau) {
  const double arg =
      (s.cap_bits * n - tau) * std::numbers::ln2 / std::sqrt(s.disp * n);
  return q_function(arg);
}

}  // namespace

RecursiveAssignResult recursive_assign(const SnrTable& snr, int n, int tau,
                                       AssignmentMatrix init) {
  const int m_count = snr.subcarriers;
  const int l = snr.cluster_size;
  if (init.subcarriers() != m_count || init.cluster_size() != l)
    throw std::invalid_argument("recursive_assign: assignment/SNR dimensions disagree");
  for (int c : init.per_ue_counts())
    if (c < 1) throw std::invalid_argument("recursive_assign: every UE needs >= 1 carrier");

  // Link quality is only ever needed at a carrier's current owner, so cache
  // exactly that and refresh the one entry a move rewrites.
  std::vector<LinkQuality> q_at_owner(static_cast<std::size_t>(m_count));
  std::vector<std::vector<int>> owned(static_cast<std::size_t>(l));
  std::vector<UeSums> sums(static_cast<std::size_t>(l));
  for (int m = 0; m < m_count; ++m) {
    const int o = init.owner_of(m);
    q_at_owner[static_cast<std::size_t>(m)] = LinkQuality::from_snr(snr(m, o));
    owned[static_cast<std::size_t>(o)].push_back(m);
    sums[static_cast<std::size_t>(o)].cap_bits += q_at_owner[static_cast<std::size_t>(m)].capacity;
    sums[static_cast<std::size_t>(o)].disp += q_at_owner[static_cast<std::size_t>(m)].dispersion;
  }
  std::vector<double> eps(static_cast<std::size_t>(l));
  for (int i = 0; i < l; ++i)
    eps[static_cast<std::size_t>(i)] = eps_from_sums(sums[static_cast<std::size_t>(i)], n, tau);

  RecursiveAssignResult res{std::move(init), 0, 0.0, 0.0};
  double sum_eps = std::accumulate(eps.begin(), eps.end(), 0.0);
  res.initial_sum_eps = sum_eps;

  for (;;) {
    int best = 0, worst = 0;
    for (int i = 1; i < l; ++i) {
      if (eps[static_cast<std::size_t>(i)] < eps[static_cast<std::size_t>(best)]) best = i;
      if (eps[static_cast<std::size_t>(i)] > eps[static_cast<std::size_t>(worst)]) worst = i;
    }
    if (best == worst) break;
    auto& best_owned = owned[static_cast<std::size_t>(best)];
    if (best_owned.size() <= 1) break;

    // Lowest-SNR carrier of the best UE; lowest index on ties.
    std::size_t move_pos = 0;
    for (std::size_t p = 1; p < best_owned.size(); ++p) {
      const double s = snr(best_owned[p], best);
      const double cur = snr(best_owned[move_pos], best);
      if (s < cur || (s == cur && best_owned[p] < best_owned[move_pos])) move_pos = p;
    }
    const int move_m = best_owned[move_pos];

    const LinkQuality& leaving = q_at_owner[static_cast<std::size_t>(move_m)];
    const LinkQuality arriving = LinkQuality::from_snr(snr(move_m, worst));
    UeSums best_sums = sums[static_cast<std::size_t>(best)];
    UeSums worst_sums = sums[static_cast<std::size_t>(worst)];
    best_sums.cap_bits -= leaving.capacity;
    best_sums.disp -= leaving.dispersion;
    worst_sums.cap_bits += arriving.capacity;
    worst_sums.disp += arriving.dispersion;
    const double eps_best = eps_from_sums(best_sums, n, tau);
    const double eps_worst = eps_from_sums(worst_sums, n, tau);
    const double new_sum = sum_eps - eps[static_cast<std::size_t>(best)] -
                           eps[static_cast<std::size_t>(worst)] + eps_best + eps_worst;
    if (!(new_sum < sum_eps)) break;

    res.assignment.move_carrier(move_m, worst);
    best_owned[move_pos] = best_owned.back();
    best_owned.pop_back();
    owned[static_cast<std::size_t>(worst)].push_back(move_m);
    q_at_owner[static_cast<std::size_t>(move_m)] = arriving;
    sums[static_cast<std::size_t>(best)] = best_sums;
    sums[static_cast<std::size_t>(worst)] = worst_sums;
    eps[static_cast<std::size_t>(best)] = eps_best;
    eps[static_cast<std::size_t>(worst)] = eps_worst;
    sum_eps = new_sum;
    ++res.iterations;
  }

  res.final_sum_eps = sum_eps;
  return res;
}

namespace {

std::vector<std::vector<int>> compositions(int total, int parts) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(parts), 1);
  // Lexicographic enumeration over the first parts-1 entries.
  const auto rest = [&](int upto) {
    int s = 0;
    for (int j = 0; j < upto; ++j) s += cur[static_cast<std::size_t>(j)];
    return s;
  };
  for (;;) {
    cur[static_cast<std::size_t>(parts - 1)] = total - rest(parts - 1);
    if (cur[static_cast<std::size_t>(parts - 1)] >= 1) out.push_back(cur);
    int j = parts - 2;
    while (j >= 0) {
      ++cur[static_cast<std::size_t>(j)];
      if (rest(j + 1) + (parts - 1 - j) <= total) break;
      cur[static_cast<std::size_t>(j)] = 1;
      --j;
    }
    if (j < 0) break;
  }
  return out;
}

}  // namespace

PartitionScan brute_force_partition_scan(int subcarriers, int cluster_size,
                                         const GainDistribution& dist, int n, int tau,
                                         std::uint64_t samples, std::uint64_t seed) {
  if (subcarriers > 12 || cluster_size > 4)
    throw std::invalid_argument("brute_force_partition_scan: bounds are M <= 12, l <= 4");
  if (cluster_size < 1 || subcarriers < cluster_size)
    throw std::invalid_argument("brute_force_partition_scan: need 1 <= l <= M");
  if (samples < 1) throw std::invalid_argument("brute_force_partition_scan: samples >= 1");

  const auto comps = compositions(subcarriers, cluster_size);
  PartitionScan scan;
  scan.entries.resize(comps.size());
  for (std::size_t c = 0; c < comps.size(); ++c) scan.entries[c].counts = comps[c];

  // Most uniform composition: first one with spread <= 1.
  scan.uniform_index = 0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    const auto [mn, mx] = std::minmax_element(comps[c].begin(), comps[c].end());
    if (*mx - *mn <= 1) {
      scan.uniform_index = c;
      break;
    }
  }

  Rng rng(seed);
  const std::size_t l = static_cast<std::size_t>(cluster_size);
  const std::size_t m = static_cast<std::size_t>(subcarriers);
  // q_tab[i][b-1]: PER of UE slot i when holding the first b gains of its
  // per-sample stream. Shared prefixes give common random numbers across
  // compositions.
  std::vector<double> q_tab(l * m);
  std::vector<double> mean_obj(comps.size(), 0.0);
  std::vector<double> diff_mean(comps.size(), 0.0);
  std::vector<double> diff_m2(comps.size(), 0.0);

  for (std::uint64_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < l; ++i) {
      double cap = 0.0, disp = 0.0;
      for (std::size_t b = 0; b < m; ++b) {
        const LinkQuality lk = LinkQuality::from_snr(dist.sample(rng));
        cap += lk.capacity;
        disp += lk.dispersion;
        const double arg = (cap * n - tau) * std::numbers::ln2 / std::sqrt(disp * n);
        q_tab[i * m + b] = q_function(arg);
      }
    }
    double uniform_obj = 0.0;
    {
      const auto& uc = comps[scan.uniform_index];
      for (std::size_t i = 0; i < l; ++i)
        uniform_obj += q_tab[i * m + static_cast<std::size_t>(uc[i] - 1)];
    }
    const double count = static_cast<double>(s + 1);
    for (std::size_t c = 0; c < comps.size(); ++c) {
      double obj = 0.0;
      for (std::size_t i = 0; i < l; ++i)
        obj += q_tab[i * m + static_cast<std::size_t>(comps[c][i] - 1)];
      mean_obj[c] += (obj - mean_obj[c]) / count;
      const double d = obj - uniform_obj;
      const double d_delta = d - diff_mean[c];
      diff_mean[c] += d_delta / count;
      diff_m2[c] += d_delta * (d - diff_mean[c]);
    }
  }

  scan.best_index = 0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    scan.entries[c].mean_objective = mean_obj[c];
    scan.entries[c].diff_vs_uniform = diff_mean[c];
    scan.entries[c].diff_se =
        samples > 1 ? std::sqrt(diff_m2[c] / (static_cast<double>(samples) - 1.0) /
                                static_cast<double>(samples))
                    : 0.0;
    if (mean_obj[c] < mean_obj[scan.best_index]) scan.best_index = c;
  }
  return scan;
}

std::vector<int> brute_force_partition_oracle(int subcarriers, int cluster_size,
                                              const GainDistribution& dist, int n, int tau,
                                              std::uint64_t samples, std::uint64_t seed) {
  const PartitionScan scan =
      brute_force_partition_scan(subcarriers, cluster_size, dist, n, tau, samples, seed);
  return scan.entries[scan.best_index].counts;
}

}  // namespace aoisched
