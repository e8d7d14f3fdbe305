#include "aoisched/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "aoisched/rng.hpp"

namespace aoisched {

std::string to_string(Policy p) {
  switch (p) {
    case Policy::ClusteredRR: return "clustered_rr";
    case Policy::AoiIndex: return "aoi_index";
    case Policy::Random: return "random";
    case Policy::NoClustering: return "no_clustering";
    case Policy::UrllcBaseline: return "urllc_baseline";
  }
  throw std::invalid_argument("to_string: bad policy");
}

Policy parse_policy(const std::string& s) {
  if (s == "clustered_rr") return Policy::ClusteredRR;
  if (s == "aoi_index") return Policy::AoiIndex;
  if (s == "random") return Policy::Random;
  if (s == "no_clustering") return Policy::NoClustering;
  if (s == "urllc_baseline") return Policy::UrllcBaseline;
  throw std::invalid_argument("unknown scheduler policy: " + s);
}

std::vector<int> next_cluster_rr(SchedulerState& state, int ue_count) {
  const int l = state.cluster_size;
  if (l < 1 || l > ue_count)
    throw std::invalid_argument("next_cluster_rr: need 1 <= l <= I");
  std::vector<int> cluster(static_cast<std::size_t>(l));
  for (int j = 0; j < l; ++j)
    cluster[static_cast<std::size_t>(j)] = (state.rr_cursor + j) % ue_count;
  state.rr_cursor = (state.rr_cursor + l) % ue_count;
  return cluster;
}

std::vector<int> next_cluster_aoi_index(const AoiIndexInputs& in, int cluster_size) {
  const int ue_count = static_cast<int>(in.aoi.size());
  if (in.est_per.size() != in.aoi.size())
    throw std::invalid_argument("next_cluster_aoi_index: input sizes disagree");
  if (cluster_size < 1 || cluster_size > ue_count)
    throw std::invalid_argument("next_cluster_aoi_index: need 1 <= l <= I");

  std::vector<int> ids(static_cast<std::size_t>(ue_count));
  std::iota(ids.begin(), ids.end(), 0);
  const auto zeta = [&](int i) {
    const double h = in.aoi[static_cast<std::size_t>(i)];
    return h * (h + 1.0) * (1.0 - in.est_per[static_cast<std::size_t>(i)]);
  };
  std::partial_sort(ids.begin(), ids.begin() + cluster_size, ids.end(),
                    [&](int a, int b) {
                      const double za = zeta(a), zb = zeta(b);
                      if (za != zb) return za > zb;
                      return a < b;
                    });
  ids.resize(static_cast<std::size_t>(cluster_size));
  return ids;
}

std::vector<int> next_cluster_random(Rng& rng, int ue_count, int cluster_size) {
  if (cluster_size < 1 || cluster_size > ue_count)
    throw std::invalid_argument("next_cluster_random: need 1 <= l <= I");
  // Partial Fisher-Yates over the UE list.
  std::vector<int> ids(static_cast<std::size_t>(ue_count));
  std::iota(ids.begin(), ids.end(), 0);
  for (int j = 0; j < cluster_size; ++j) {
    const int k = j + static_cast<int>(rng.uniform_below(
                          static_cast<std::uint64_t>(ue_count - j)));
    std::swap(ids[static_cast<std::size_t>(j)], ids[static_cast<std::size_t>(k)]);
  }
  ids.resize(static_cast<std::size_t>(cluster_size));
  return ids;
}

UrllcSizing urllc_cluster_size(const ClusterOptInput& in, int ue_count,
                               double slot_duration_s, double max_delay_s,
                               double target_per) {
  in.validate();
  if (!(target_per > 0.0) || !(target_per < 1.0))
    throw std::invalid_argument("urllc_cluster_size: target_per must be in (0,1)");
  if (!(max_delay_s >= slot_duration_s) || !(slot_duration_s > 0.0))
    throw std::invalid_argument("urllc_cluster_size: need max_delay >= slot_duration > 0");
  if (ue_count < 1) throw std::invalid_argument("urllc_cluster_size: ue_count >= 1");

  const int l_max = std::min(ue_count, in.subcarriers);
  UrllcSizing best{};
  bool have_feasible = false;
  double best_violation = std::numeric_limits<double>::infinity();
  for (int l = 1; l <= l_max; ++l) {
    const double eps = uniform_eps(in, static_cast<double>(l));
    const double revisit =
        std::ceil(static_cast<double>(ue_count) / l) * slot_duration_s;
    const bool ok = eps <= target_per && revisit <= max_delay_s;
    if (ok) {
      have_feasible = true;
      // Largest feasible l is the most AoI-favorable within the targets.
      best = UrllcSizing{l, true, eps, revisit};
    } else if (!have_feasible) {
      const double violation = std::max(0.0, (eps - target_per) / target_per) +
                               std::max(0.0, (revisit - max_delay_s) / max_delay_s);
      if (violation <= best_violation) {
        best_violation = violation;
        best = UrllcSizing{l, false, eps, revisit};
      }
    }
  }
  return best;
}

}  // namespace aoisched
