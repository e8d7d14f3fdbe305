#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "aoisched/rng.hpp"
#include "aoisched/scheduler.hpp"

using namespace aoisched;

TEST_CASE("clustered RR slides its window with wraparound") {
  SchedulerState st{Policy::ClusteredRR, 3, 0};
  CHECK(next_cluster_rr(st, 8) == std::vector<int>{0, 1, 2});
  CHECK(next_cluster_rr(st, 8) == std::vector<int>{3, 4, 5});
  CHECK(next_cluster_rr(st, 8) == std::vector<int>{6, 7, 0});
  CHECK(next_cluster_rr(st, 8) == std::vector<int>{1, 2, 3});
}

TEST_CASE("full cluster selects everyone") {
  SchedulerState st{Policy::ClusteredRR, 4, 0};
  for (int s = 0; s < 5; ++s) {
    std::vector<int> c = next_cluster_rr(st, 4);
    std::sort(c.begin(), c.end());
    CHECK(c == std::vector<int>{0, 1, 2, 3});
  }
}

TEST_CASE("RR selection counts are balanced over a cycle") {
  // l | I: over ceil(I/l)*l slots every UE appears exactly l*l*ceil(I/l)/I times.
  const int ue_count = 8, l = 2;
  SchedulerState st{Policy::ClusteredRR, l, 0};
  std::vector<int> count(ue_count, 0);
  const int slots = ((ue_count + l - 1) / l) * l;  // 8
  for (int s = 0; s < slots; ++s)
    for (int ue : next_cluster_rr(st, ue_count)) ++count[static_cast<std::size_t>(ue)];
  for (int c : count) CHECK(c == slots * l / ue_count);
}

TEST_CASE("RR inter-selection gaps stay within floor/ceil of I/l") {
  const int ue_count = 8, l = 3;
  SchedulerState st{Policy::ClusteredRR, l, 0};
  std::vector<int> last_seen(ue_count, -1);
  for (int s = 0; s < 120; ++s) {
    for (int ue : next_cluster_rr(st, ue_count)) {
      if (last_seen[static_cast<std::size_t>(ue)] >= 0) {
        const int gap = s - last_seen[static_cast<std::size_t>(ue)];
        CHECK(gap >= ue_count / l);        // floor(8/3) = 2
        CHECK(gap <= (ue_count + l - 1) / l);  // ceil(8/3) = 3
      }
      last_seen[static_cast<std::size_t>(ue)] = s;
    }
  }
}

TEST_CASE("cluster size above the population is rejected") {
  SchedulerState st{Policy::ClusteredRR, 5, 0};
  CHECK_THROWS_AS(next_cluster_rr(st, 4), std::invalid_argument);
}

TEST_CASE("AoI index: all-equal inputs fall back to lowest ids") {
  const std::vector<double> h(6, 3.0), eps(6, 0.2);
  CHECK(next_cluster_aoi_index({h, eps}, 3) == std::vector<int>{0, 1, 2});
}

TEST_CASE("AoI index: the stale UE wins") {
  const std::vector<double> h{5.0, 1.0, 1.0, 1.0};
  const std::vector<double> eps(4, 0.0);
  CHECK(next_cluster_aoi_index({h, eps}, 1) == std::vector<int>{0});
}

TEST_CASE("AoI index favours the cleaner channel at equal age") {
  const std::vector<double> h{4.0, 4.0};
  const std::vector<double> eps{0.5, 0.1};
  CHECK(next_cluster_aoi_index({h, eps}, 1) == std::vector<int>{1});
}

TEST_CASE("error-free AoI index reproduces round-robin from equal state") {
  // With eps = 0 and equal initial AoI the greedy max-age rule cycles the
  // population exactly like RR.
  const int ue_count = 5, l = 1, slots = 100;
  std::vector<double> h(ue_count, 1.0), eps(ue_count, 0.0);
  SchedulerState rr{Policy::ClusteredRR, l, 0};
  for (int s = 0; s < slots; ++s) {
    const std::vector<int> picked = next_cluster_aoi_index({h, eps}, l);
    CHECK(picked == next_cluster_rr(rr, ue_count));
    for (int i = 0; i < ue_count; ++i) {
      if (i == picked.front())
        h[static_cast<std::size_t>(i)] = 1.0;  // delivered
      else
        h[static_cast<std::size_t>(i)] += 1.0;
    }
  }
}

TEST_CASE("random policy emits valid, seed-stable clusters") {
  Rng a(21), b(21);
  for (int s = 0; s < 30; ++s) {
    const std::vector<int> ca = next_cluster_random(a, 9, 4);
    CHECK(ca == next_cluster_random(b, 9, 4));
    CHECK(ca.size() == 4);
    std::set<int> uniq(ca.begin(), ca.end());
    CHECK(uniq.size() == 4);
    for (int ue : ca) {
      CHECK(ue >= 0);
      CHECK(ue < 9);
    }
  }
}

TEST_CASE("urllc sizing picks the boundary cluster at target one half") {
  // snr = 1 gives capacity exactly 1 bit; M*C*n/tau' bound sits at l = 2.
  const ClusterOptInput in = ClusterOptInput::from_snr(4, 1, 1.0, 2);
  const UrllcSizing s = urllc_cluster_size(in, 8, 1e-3, 1.0, 0.5);
  CHECK(s.feasible);
  CHECK(s.cluster_size == 2);
  CHECK(s.eps == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("urllc sizing grows with snr under a loose delay budget") {
  const int m = 100, tau = 32;
  const UrllcSizing low = urllc_cluster_size(
      ClusterOptInput::from_snr(m, 1, std::pow(10.0, 0.2), tau), 100, 1e-3, 1.0, 1e-5);
  const UrllcSizing high = urllc_cluster_size(
      ClusterOptInput::from_snr(m, 1, std::pow(10.0, 1.2), tau), 100, 1e-3, 1.0, 1e-5);
  CHECK(low.feasible);
  CHECK(high.feasible);
  CHECK(high.cluster_size > low.cluster_size);
}

TEST_CASE("urllc sizing flags irreconcilable targets") {
  // Tight PER and a delay budget of a single slot for 100 UEs cannot both
  // hold; the rule must still return a deterministic compromise.
  const ClusterOptInput in = ClusterOptInput::from_snr(100, 1, std::pow(10.0, 0.5), 32);
  const UrllcSizing s = urllc_cluster_size(in, 100, 71.3e-6, 1e-3, 1e-5);
  CHECK_FALSE(s.feasible);
  CHECK(s.cluster_size >= 1);
  CHECK(s.cluster_size <= 100);
  const UrllcSizing again = urllc_cluster_size(in, 100, 71.3e-6, 1e-3, 1e-5);
  CHECK(s.cluster_size == again.cluster_size);
}

TEST_CASE("policy names round-trip") {
  for (Policy p : {Policy::ClusteredRR, Policy::AoiIndex, Policy::Random,
                   Policy::NoClustering, Policy::UrllcBaseline})
    CHECK(parse_policy(to_string(p)) == p);
  CHECK_THROWS_AS(parse_policy("nonsense"), std::invalid_argument);
}
