#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "aoisched/dominance.hpp"
#include "aoisched/rng.hpp"

using namespace aoisched;
using namespace aoisched::dominance;

namespace {

Schedule single_ue_schedule(const std::vector<int>& ues) {
  Schedule s;
  s.reserve(ues.size());
  for (int ue : ues) s.push_back({ue});
  return s;
}

// Worked two-UE example: pi = 1,2,2,2,1,1,2,1,2,1 (0-based ids here).
Schedule worked_example_pi() {
  return single_ue_schedule({0, 1, 1, 1, 0, 0, 1, 0, 1, 0});
}
Schedule worked_example_pi_prime() {
  return single_ue_schedule({0, 1, 1, 0, 0, 1, 1, 0, 1, 0});
}
// Equality-variant example: pi = 2,1,1,2,2,1,1,2,2,1.
Schedule equality_example_pi() {
  return single_ue_schedule({1, 0, 0, 1, 1, 0, 0, 1, 1, 0});
}
Schedule equality_example_pi_prime() {
  return single_ue_schedule({1, 0, 0, 1, 0, 1, 0, 1, 1, 0});
}

Schedule random_schedule(Rng& rng, int ue_count, int slots) {
  Schedule s(static_cast<std::size_t>(slots));
  for (auto& cluster : s)
    cluster = {static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(ue_count)))};
  return s;
}

}  // namespace

TEST_CASE("ITI rows of the worked example") {
  const ITIHistory h = iti_from_schedule(worked_example_pi(), 2, 10);
  CHECK(h.intervals[0] == std::vector<long>{1, 4, 1, 2, 2, 1});
  CHECK(h.intervals[1] == std::vector<long>{2, 1, 1, 3, 2, 2});
  h.check_conservation();
  // interval count conservation: sum_i k_i = I + l*T
  CHECK(h.k(0) + h.k(1) == 2 + 10);
}

TEST_CASE("round-robin keeps every interval at or below the revisit gap") {
  const ITIHistory h = iti_from_schedule(rr_schedule(2, 1, 10), 2, 10);
  for (int i = 0; i < 2; ++i)
    for (long s : h.intervals[static_cast<std::size_t>(i)]) CHECK(s <= 2);
}

TEST_CASE("conservation laws hold on random schedules") {
  Rng rng(5);
  for (int trial = 0; trial < 1000; ++trial) {
    const int ue_count = 2 + static_cast<int>(rng.uniform_below(4));
    const int slots = 3 + static_cast<int>(rng.uniform_below(25));
    const Schedule s = random_schedule(rng, ue_count, slots);
    const ITIHistory h = iti_from_schedule(s, ue_count, slots);
    h.check_conservation();
    long k_total = 0;
    for (int i = 0; i < ue_count; ++i) k_total += h.k(i);
    CHECK(k_total == ue_count + slots);  // l = 1
  }
}

TEST_CASE("malformed schedules are rejected") {
  Schedule bad = {{0}, {0, 1}};
  CHECK_THROWS_AS(iti_from_schedule(bad, 2, 2), std::invalid_argument);
  Schedule dup = {{0, 0}};
  CHECK_THROWS_AS(iti_from_schedule(dup, 2, 1), std::invalid_argument);
  Schedule range = {{3}};
  CHECK_THROWS_AS(iti_from_schedule(range, 2, 1), std::invalid_argument);
}

TEST_CASE("measure of the always-transmitting UE is uniform over ages") {
  const Schedule s = single_ue_schedule({0, 0, 0, 0, 0});
  const ITIHistory h = iti_from_schedule(s, 1, 5);
  const StochasticMeasure m = measure_from_iti(h);
  REQUIRE(m.pmf.size() == 6);
  for (double p : m.pmf) CHECK(p == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(m.cdf.back() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("measure is a probability measure on random schedules") {
  Rng rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const int ue_count = 2 + static_cast<int>(rng.uniform_below(3));
    const int slots = 3 + static_cast<int>(rng.uniform_below(20));
    const StochasticMeasure m =
        measure_from_iti(iti_from_schedule(random_schedule(rng, ue_count, slots),
                                           ue_count, slots));
    double sum = 0.0;
    double prev_cdf = 0.0;
    for (std::size_t k = 0; k < m.pmf.size(); ++k) {
      CHECK(m.pmf[k] >= 0.0);
      sum += m.pmf[k];
      CHECK(m.cdf[k] >= prev_cdf - 1e-15);
      prev_cdf = m.cdf[k];
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(m.cdf.back() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("the two AoI evaluation routes agree to 1e-12") {
  Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const int ue_count = 2 + static_cast<int>(rng.uniform_below(3));
    const int slots = 3 + static_cast<int>(rng.uniform_below(20));
    const ITIHistory h =
        iti_from_schedule(random_schedule(rng, ue_count, slots), ue_count, slots);
    for (double eps : {0.0, 0.1, 0.5, 0.9, 0.999}) {
      const double a = expected_avg_aoi(h, eps);
      const double b = expected_avg_aoi_via_measure(h, eps);
      CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
  }
}

TEST_CASE("AoI limits in eps") {
  const ITIHistory h = iti_from_schedule(worked_example_pi(), 2, 10);
  // eps = 0: only the newest interval of each UE survives.
  const double tail_mean =
      (h.intervals[0].back() + h.intervals[1].back()) / 2.0;
  CHECK(expected_avg_aoi(h, 0.0) == doctest::Approx(tail_mean).epsilon(1e-12));
  // eps -> 1: the whole mass, slots + 1 under unit initial state.
  CHECK(expected_avg_aoi(h, 1.0 - 1e-12) == doctest::Approx(11.0).epsilon(1e-9));
  CHECK_THROWS_AS(expected_avg_aoi(h, 1.0), std::invalid_argument);
}

TEST_CASE("slot exchange reproduces the worked example") {
  const ExchangeTuple tuple{0, 1, 3, 2, 4};
  const ExchangeResult res = slot_exchange(worked_example_pi(), tuple);
  CHECK(res.schedule == worked_example_pi_prime());
  CHECK(res.tau1 == 6);
  CHECK(res.tau2 == 4);

  // The exchanged schedule second-order dominates the original and keeps the
  // first moment.
  const StochasticMeasure before = measure_from_iti(iti_from_schedule(worked_example_pi(), 2, 10));
  const StochasticMeasure after =
      measure_from_iti(iti_from_schedule(res.schedule, 2, 10));
  const long k_max = static_cast<long>(
      std::max(before.second_order.size(), after.second_order.size()));
  bool strictly_somewhere = false;
  for (long k = 0; k < k_max; ++k) {
    CHECK(after.second_order_at(k) <= before.second_order_at(k) + 1e-12);
    if (after.second_order_at(k) < before.second_order_at(k) - 1e-12)
      strictly_somewhere = true;
  }
  CHECK(strictly_somewhere);
  CHECK(after.mean() == doctest::Approx(before.mean()).epsilon(1e-12));

  // Expected AoI improves for every error rate in (0,1).
  const ITIHistory hb = iti_from_schedule(worked_example_pi(), 2, 10);
  const ITIHistory ha = iti_from_schedule(res.schedule, 2, 10);
  for (double eps : {0.1, 0.3, 0.7})
    CHECK(expected_avg_aoi(ha, eps) <= expected_avg_aoi(hb, eps) + 1e-12);
}

TEST_CASE("derive_exchange_tuple recovers the worked tuple") {
  const auto t = derive_exchange_tuple(worked_example_pi(), 0, 1, 3);
  REQUIRE(t.has_value());
  CHECK(t->kappa_prime == 2);
  CHECK(t->kappa_dprime == 4);
}

TEST_CASE("equality-variant exchange keeps the measure") {
  const auto derived = derive_exchange_tuple(equality_example_pi(), 0, 1, 3);
  REQUIRE(derived.has_value());
  CHECK(derived->kappa_prime == 2);
  CHECK(derived->kappa_dprime == 3);  // kappa'' = kappa = kappa' + 1
  const ExchangeResult res = slot_exchange(equality_example_pi(), *derived);
  CHECK(res.schedule == equality_example_pi_prime());
  const StochasticMeasure before =
      measure_from_iti(iti_from_schedule(equality_example_pi(), 2, 10));
  const StochasticMeasure after =
      measure_from_iti(iti_from_schedule(res.schedule, 2, 10));
  const long k_max = static_cast<long>(
      std::max(before.second_order.size(), after.second_order.size()));
  for (long k = 0; k < k_max; ++k)
    CHECK(after.second_order_at(k) ==
          doctest::Approx(before.second_order_at(k)).epsilon(1e-12));
}

TEST_CASE("exchange acts as a transposition on the touched slots") {
  const ExchangeTuple tuple{0, 1, 3, 2, 4};
  const ExchangeResult res = slot_exchange(worked_example_pi(), tuple);
  Schedule back = res.schedule;
  std::swap(back[static_cast<std::size_t>(res.tau1 - 1)],
            back[static_cast<std::size_t>(res.tau2 - 1)]);
  CHECK(back == worked_example_pi());
}

TEST_CASE("invalid exchange tuples are rejected") {
  // wrong kappa': mismatch with the schedule
  CHECK_THROWS_AS(slot_exchange(worked_example_pi(), {0, 1, 3, 1, 4}),
                  std::invalid_argument);
  // no valid tau for an oversized kappa
  CHECK_THROWS_AS(slot_exchange(worked_example_pi(), {0, 1, 40, 2, 4}),
                  std::invalid_argument);
}

TEST_CASE("random admissible exchanges: dominance and equality variants") {
  Rng rng(31);
  long dominance_cases = 0, equality_cases = 0;
  while (dominance_cases < 10000 || equality_cases < 1000) {
    const int ue_count = 2 + static_cast<int>(rng.uniform_below(2));
    const int slots = 6 + static_cast<int>(rng.uniform_below(14));
    const Schedule s = random_schedule(rng, ue_count, slots);
    const int x = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(ue_count)));
    int y = static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(ue_count)));
    if (y == x) y = (y + 1) % ue_count;
    const long kappa = 1 + static_cast<long>(rng.uniform_below(6));
    const auto tuple = derive_exchange_tuple(s, x, y, kappa);
    if (!tuple) continue;
    const bool dominance_variant = tuple->kappa_prime <= tuple->kappa - 2 &&
                                   tuple->kappa < tuple->kappa_dprime;
    const bool equality_variant = tuple->kappa_dprime == tuple->kappa &&
                                  tuple->kappa == tuple->kappa_prime + 1;
    if (!dominance_variant && !equality_variant) continue;

    const ExchangeResult res = slot_exchange(s, *tuple);
    const StochasticMeasure before =
        measure_from_iti(iti_from_schedule(s, ue_count, slots));
    const StochasticMeasure after =
        measure_from_iti(iti_from_schedule(res.schedule, ue_count, slots));
    const long k_max = static_cast<long>(
        std::max(before.second_order.size(), after.second_order.size()));
    if (dominance_variant) {
      for (long k = 0; k < k_max; ++k)
        CHECK(after.second_order_at(k) <= before.second_order_at(k) + 1e-12);
      CHECK(after.mean() == doctest::Approx(before.mean()).epsilon(1e-12));
      ++dominance_cases;
    } else {
      for (long k = 0; k < k_max; ++k)
        CHECK(after.second_order_at(k) ==
              doctest::Approx(before.second_order_at(k)).epsilon(1e-12));
      ++equality_cases;
    }
  }
  CHECK(dominance_cases >= 10000);
}

TEST_CASE("RR beats the worked example at every error rate") {
  const ITIHistory rr = iti_from_schedule(rr_schedule(2, 1, 10), 2, 10);
  const ITIHistory pi = iti_from_schedule(worked_example_pi(), 2, 10);
  for (double eps : {0.1, 0.3, 0.5, 0.9})
    CHECK(expected_avg_aoi(rr, eps) < expected_avg_aoi(pi, eps));
}

TEST_CASE("exhaustive optimality on the smallest lab instance") {
  const std::vector<double> eps_grid{0.1, 0.5, 0.9};
  const RrOptimalityReport rep = verify_rr_optimality(2, 1, 6, eps_grid);
  CHECK(rep.pass);
  CHECK(rep.schedules_checked == 64);
  for (std::size_t e = 0; e < eps_grid.size(); ++e)
    CHECK(rep.rr_aoi[e] == doctest::Approx(rep.min_aoi[e]).epsilon(1e-12));
}

TEST_CASE("every RR rotation attains the same expected AoI") {
  for (int start = 0; start < 3; ++start) {
    const ITIHistory h = iti_from_schedule(rr_schedule(3, 1, 9, start), 3, 9);
    const ITIHistory h0 = iti_from_schedule(rr_schedule(3, 1, 9, 0), 3, 9);
    for (double eps : {0.2, 0.6})
      CHECK(expected_avg_aoi(h, eps) ==
            doctest::Approx(expected_avg_aoi(h0, eps)).epsilon(1e-12));
  }
}

TEST_CASE("enumeration bound is enforced") {
  const std::vector<double> eps_grid{0.5};
  CHECK_THROWS_AS(verify_rr_optimality(4, 2, 20, eps_grid), std::invalid_argument);
}

TEST_CASE("initial state influence vanishes on the long horizon") {
  Rng rng(71);
  std::vector<long> initial{40, 7, 23};
  for (double eps : {0.5, 0.9}) {
    // clustered RR and a random schedule both wash out the start state
    for (const Schedule& s :
         {rr_schedule(3, 1, 1000), random_schedule(rng, 3, 1000)}) {
      const ITIHistory h = iti_from_schedule(s, 3, 1000, initial);
      const double total = expected_avg_aoi(h, eps);
      const double from_init = initial_state_term(h, eps);
      CHECK(from_init / (total - from_init) < 1e-3);
    }
  }
}

TEST_CASE("general initial state keeps conservation") {
  const std::vector<long> initial{5, 2};
  const ITIHistory h = iti_from_schedule(worked_example_pi(), 2, 10, initial);
  h.check_conservation();
  // UE 0 transmits in slot 1, freezing its initial interval at 5; UE 1 idles
  // through slot 1 first, so its opening interval grew to 3.
  CHECK(h.intervals[0].front() == 5);
  CHECK(h.intervals[1].front() == 3);
  CHECK_THROWS_AS(
      iti_from_schedule(worked_example_pi(), 2, 10, std::vector<long>{0, 1}),
      std::invalid_argument);
}
