#include "aoisched/dominance.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace aoisched::dominance {
namespace {

void validate_schedule(const Schedule& schedule, int ue_count) {
  if (schedule.empty()) throw std::invalid_argument("schedule: empty");
  const std::size_t l = schedule.front().size();
  if (l == 0) throw std::invalid_argument("schedule: empty cluster");
  for (const auto& cluster : schedule) {
    if (cluster.size() != l)
      throw std::invalid_argument("schedule: cluster size varies across slots");
    for (std::size_t j = 0; j < cluster.size(); ++j) {
      if (cluster[j] < 0 || cluster[j] >= ue_count)
        throw std::invalid_argument("schedule: UE id out of range");
      for (std::size_t j2 = j + 1; j2 < cluster.size(); ++j2)
        if (cluster[j] == cluster[j2])
          throw std::invalid_argument("schedule: duplicate UE in a cluster");
    }
  }
}

long cumsum_at(const std::vector<long>& v, long idx1) {  // 1-based prefix sum
  long s = 0;
  for (long j = 0; j < idx1; ++j) s += v[static_cast<std::size_t>(j)];
  return s;
}

bool contains(const std::vector<int>& cluster, int ue) {
  return std::find(cluster.begin(), cluster.end(), ue) != cluster.end();
}

int ue_count_of(const Schedule& schedule) {
  int n = 0;
  for (const auto& cluster : schedule)
    for (int id : cluster) n = std::max(n, id + 1);
  return n;
}

}  // namespace

void ITIHistory::check_conservation() const {
  for (int i = 0; i < ue_count; ++i) {
    long sum = 0;
    for (long s : intervals[static_cast<std::size_t>(i)]) sum += s;
    if (sum != slots + initial[static_cast<std::size_t>(i)])
      throw std::logic_error("ITIHistory: interval mass conservation violated");
  }
}

ITIHistory iti_from_schedule(const Schedule& schedule, int ue_count, long t,
                             std::span<const long> initial) {
  if (t < 0 || t > static_cast<long>(schedule.size()))
    throw std::invalid_argument("iti_from_schedule: t exceeds schedule length");
  if (ue_count < 1) throw std::invalid_argument("iti_from_schedule: ue_count >= 1");
  validate_schedule(schedule, ue_count);
  if (!initial.empty() && static_cast<int>(initial.size()) != ue_count)
    throw std::invalid_argument("iti_from_schedule: initial size mismatch");

  ITIHistory h;
  h.ue_count = ue_count;
  h.slots = t;
  h.initial.assign(static_cast<std::size_t>(ue_count), 1);
  if (!initial.empty())
    for (int i = 0; i < ue_count; ++i) {
      if (initial[static_cast<std::size_t>(i)] < 1)
        throw std::invalid_argument("iti_from_schedule: initial AoI must be >= 1");
      h.initial[static_cast<std::size_t>(i)] = initial[static_cast<std::size_t>(i)];
    }
  h.intervals.resize(static_cast<std::size_t>(ue_count));
  for (int i = 0; i < ue_count; ++i)
    h.intervals[static_cast<std::size_t>(i)] = {h.initial[static_cast<std::size_t>(i)]};

  for (long slot = 0; slot < t; ++slot) {
    const auto& cluster = schedule[static_cast<std::size_t>(slot)];
    for (int i = 0; i < ue_count; ++i) {
      auto& row = h.intervals[static_cast<std::size_t>(i)];
      if (contains(cluster, i))
        row.push_back(1);
      else
        ++row.back();
    }
  }
  return h;
}

StochasticMeasure measure_from_iti(const ITIHistory& history) {
  long max_k = 0;
  double total = 0.0;
  for (int i = 0; i < history.ue_count; ++i) {
    max_k = std::max(max_k, history.k(i));
    for (long s : history.intervals[static_cast<std::size_t>(i)]) total += static_cast<double>(s);
  }

  StochasticMeasure m;
  m.mass_per_ue = total / history.ue_count;
  m.pmf.assign(static_cast<std::size_t>(max_k), 0.0);
  for (int i = 0; i < history.ue_count; ++i) {
    const auto& row = history.intervals[static_cast<std::size_t>(i)];
    const long k = static_cast<long>(row.size());
    // age kappa = 0 is the newest interval, kappa = k-1 the oldest
    for (long kappa = 0; kappa < k; ++kappa)
      m.pmf[static_cast<std::size_t>(kappa)] +=
          static_cast<double>(row[static_cast<std::size_t>(k - 1 - kappa)]) / total;
  }
  m.cdf.resize(m.pmf.size());
  m.second_order.resize(m.pmf.size());
  double c = 0.0, so = 0.0;
  for (std::size_t k = 0; k < m.pmf.size(); ++k) {
    c += m.pmf[k];
    so += c;
    m.cdf[k] = c;
    m.second_order[k] = so;
  }
  return m;
}

double StochasticMeasure::mean() const {
  double acc = 0.0;
  for (std::size_t k = 0; k < pmf.size(); ++k) acc += static_cast<double>(k) * pmf[k];
  return acc;
}

double StochasticMeasure::second_order_at(long kappa) const {
  if (kappa < 0) return 0.0;
  const long last = static_cast<long>(second_order.size()) - 1;
  if (kappa <= last) return second_order[static_cast<std::size_t>(kappa)];
  return second_order[static_cast<std::size_t>(last)] + static_cast<double>(kappa - last);
}

double expected_avg_aoi(const ITIHistory& history, double eps) {
  if (!(eps >= 0.0) || !(eps < 1.0))
    throw std::invalid_argument("expected_avg_aoi: eps must lie in [0, 1)");
  double acc = 0.0;
  for (int i = 0; i < history.ue_count; ++i) {
    const auto& row = history.intervals[static_cast<std::size_t>(i)];
    double ue = 0.0;  // Horner over s_1 eps^{k-1} + ... + s_k
    for (long s : row) ue = ue * eps + static_cast<double>(s);
    acc += ue;
  }
  return acc / history.ue_count;
}

double expected_avg_aoi_via_measure(const ITIHistory& history, double eps) {
  if (!(eps >= 0.0) || !(eps < 1.0))
    throw std::invalid_argument("expected_avg_aoi_via_measure: eps must lie in [0, 1)");
  const StochasticMeasure m = measure_from_iti(history);
  double acc = 0.0;
  double ek = 1.0;
  for (std::size_t k = 0; k < m.pmf.size(); ++k) {
    acc += m.pmf[k] * ek;
    ek *= eps;
  }
  return m.mass_per_ue * acc;
}

double initial_state_term(const ITIHistory& history, double eps) {
  double acc = 0.0;
  for (int i = 0; i < history.ue_count; ++i)
    acc += static_cast<double>(history.initial[static_cast<std::size_t>(i)] - 1) *
           std::pow(eps, static_cast<double>(history.k(i) - 1));
  return acc / history.ue_count;
}

std::optional<ExchangeTuple> derive_exchange_tuple(const Schedule& schedule, int x,
                                                   int y, long kappa) {
  const int ue_count = std::max(ue_count_of(schedule), 1 + std::max(x, y));
  if (x == y || x < 0 || y < 0 || kappa < 1) return std::nullopt;
  const long t = static_cast<long>(schedule.size());
  ITIHistory h = iti_from_schedule(schedule, ue_count, t);

  const auto& sx = h.intervals[static_cast<std::size_t>(x)];
  const auto& sy = h.intervals[static_cast<std::size_t>(y)];
  const long kx = static_cast<long>(sx.size());
  const long ky = static_cast<long>(sy.size());

  // Step 1: x's (k_x - kappa)-th attempt; attempts exist for indices 1..k_x-1.
  const long a1 = kx - kappa;
  if (a1 < 1 || a1 > kx - 1) return std::nullopt;
  const long tau1 = cumsum_at(sx, a1);
  if (contains(schedule[static_cast<std::size_t>(tau1 - 1)], y)) return std::nullopt;

  // Step 2: locate tau1 inside y's intervals -> kappa'.
  long j = 1;
  while (cumsum_at(sy, j) < tau1) ++j;  // first j with cumsum >= tau1 (> since y idle)
  const long kappa_prime = ky - j;

  // Step 3: y's (k_y - kappa)-th attempt -> tau2.
  if (ky < kappa + 1) return std::nullopt;
  const long a2 = ky - kappa;
  if (a2 < 1 || a2 > ky - 1) return std::nullopt;
  const long tau2 = cumsum_at(sy, a2);
  if (contains(schedule[static_cast<std::size_t>(tau2 - 1)], x)) return std::nullopt;

  // kappa'': index of the attempt x gains at tau2, counted under pi'.
  Schedule exchanged = schedule;
  auto& c1 = exchanged[static_cast<std::size_t>(tau1 - 1)];
  std::replace(c1.begin(), c1.end(), x, y);
  std::sort(c1.begin(), c1.end());
  auto& c2 = exchanged[static_cast<std::size_t>(tau2 - 1)];
  std::replace(c2.begin(), c2.end(), y, x);
  std::sort(c2.begin(), c2.end());

  ITIHistory hp = iti_from_schedule(exchanged, ue_count, t);
  const auto& sxp = hp.intervals[static_cast<std::size_t>(x)];
  const long kxp = static_cast<long>(sxp.size());
  long a3 = 0;
  for (long a = 1; a < kxp; ++a)
    if (cumsum_at(sxp, a) == tau2) {
      a3 = a;
      break;
    }
  if (a3 == 0) return std::nullopt;
  return ExchangeTuple{x, y, kappa, kappa_prime, kxp - a3};
}

ExchangeResult slot_exchange(const Schedule& schedule, const ExchangeTuple& tuple) {
  const auto derived = derive_exchange_tuple(schedule, tuple.x, tuple.y, tuple.kappa);
  if (!derived)
    throw std::invalid_argument("slot_exchange: no valid (tau1, tau2) for the tuple");
  if (derived->kappa_prime != tuple.kappa_prime ||
      derived->kappa_dprime != tuple.kappa_dprime)
    throw std::invalid_argument(
        "slot_exchange: supplied kappa'/kappa'' do not match the schedule");
  const bool interleaved =
      tuple.kappa_prime < tuple.kappa && tuple.kappa < tuple.kappa_dprime;
  const bool equality_variant = tuple.kappa_dprime == tuple.kappa &&
                                tuple.kappa == tuple.kappa_prime + 1;
  if (!interleaved && !equality_variant)
    throw std::invalid_argument("slot_exchange: tuple violates the interleaving constraints");

  // Re-derive the touched slots and apply the two reassignments.
  const long t = static_cast<long>(schedule.size());
  const int ue_count = std::max(ue_count_of(schedule), 1 + std::max(tuple.x, tuple.y));
  ITIHistory h = iti_from_schedule(schedule, ue_count, t);
  const auto& sx = h.intervals[static_cast<std::size_t>(tuple.x)];
  const auto& sy = h.intervals[static_cast<std::size_t>(tuple.y)];
  const long tau1 = cumsum_at(sx, static_cast<long>(sx.size()) - tuple.kappa);
  const long tau2 = cumsum_at(sy, static_cast<long>(sy.size()) - tuple.kappa);

  ExchangeResult res{schedule, tau1, tau2};
  auto& c1 = res.schedule[static_cast<std::size_t>(tau1 - 1)];
  std::replace(c1.begin(), c1.end(), tuple.x, tuple.y);
  std::sort(c1.begin(), c1.end());
  auto& c2 = res.schedule[static_cast<std::size_t>(tau2 - 1)];
  std::replace(c2.begin(), c2.end(), tuple.y, tuple.x);
  std::sort(c2.begin(), c2.end());
  return res;
}

Schedule rr_schedule(int ue_count, int cluster_size, int slots, int start) {
  Schedule s(static_cast<std::size_t>(slots));
  int cursor = start % ue_count;
  for (int t = 0; t < slots; ++t) {
    std::vector<int> cluster(static_cast<std::size_t>(cluster_size));
    for (int j = 0; j < cluster_size; ++j)
      cluster[static_cast<std::size_t>(j)] = (cursor + j) % ue_count;
    std::sort(cluster.begin(), cluster.end());
    s[static_cast<std::size_t>(t)] = std::move(cluster);
    cursor = (cursor + cluster_size) % ue_count;
  }
  return s;
}

namespace {

std::vector<std::vector<int>> all_clusters(int ue_count, int cluster_size) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur(static_cast<std::size_t>(cluster_size));
  for (int j = 0; j < cluster_size; ++j) cur[static_cast<std::size_t>(j)] = j;
  for (;;) {
    out.push_back(cur);
    int j = cluster_size - 1;
    while (j >= 0 && cur[static_cast<std::size_t>(j)] == ue_count - cluster_size + j) --j;
    if (j < 0) break;
    ++cur[static_cast<std::size_t>(j)];
    for (int j2 = j + 1; j2 < cluster_size; ++j2)
      cur[static_cast<std::size_t>(j2)] = cur[static_cast<std::size_t>(j2 - 1)] + 1;
  }
  return out;
}

}  // namespace

RrOptimalityReport verify_rr_optimality(int ue_count, int cluster_size, int slots,
                                        std::span<const double> eps_grid,
                                        int parallelism) {
  if (cluster_size < 1 || cluster_size > ue_count || slots < 1)
    throw std::invalid_argument("verify_rr_optimality: bad dimensions");
  const auto clusters = all_clusters(ue_count, cluster_size);
  const double total = std::pow(static_cast<double>(clusters.size()),
                                static_cast<double>(slots));
  if (total > 1e7)
    throw std::invalid_argument(
        "verify_rr_optimality: schedule space exceeds the 10^7 enumeration bound");
  const long count = static_cast<long>(total);

  const Schedule rr = rr_schedule(ue_count, cluster_size, slots);
  const ITIHistory rr_h = iti_from_schedule(rr, ue_count, slots);
  const StochasticMeasure rr_m = measure_from_iti(rr_h);
  RrOptimalityReport report;
  report.rr_aoi.resize(eps_grid.size());
  report.min_aoi.assign(eps_grid.size(), std::numeric_limits<double>::infinity());
  for (std::size_t e = 0; e < eps_grid.size(); ++e)
    report.rr_aoi[e] = expected_avg_aoi(rr_h, eps_grid[e]);

  int workers = parallelism > 0 ? parallelism
                                : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;

  struct Partial {
    double worst_aoi = std::numeric_limits<double>::infinity();
    double worst_dom = std::numeric_limits<double>::infinity();
    std::vector<double> min_aoi;
  };
  std::vector<Partial> partials(static_cast<std::size_t>(workers));
  std::atomic<long> next_block{0};
  const long block = 1024;

  auto work = [&](int wi) {
    Partial& p = partials[static_cast<std::size_t>(wi)];
    p.min_aoi.assign(eps_grid.size(), std::numeric_limits<double>::infinity());
    Schedule sched(static_cast<std::size_t>(slots));
    std::vector<long> digits(static_cast<std::size_t>(slots));
    for (;;) {
      const long begin = next_block.fetch_add(block);
      if (begin >= count) break;
      const long end = std::min(count, begin + block);
      for (long idx = begin; idx < end; ++idx) {
        long v = idx;
        for (int s = 0; s < slots; ++s) {
          digits[static_cast<std::size_t>(s)] = v % static_cast<long>(clusters.size());
          v /= static_cast<long>(clusters.size());
        }
        for (int s = 0; s < slots; ++s)
          sched[static_cast<std::size_t>(s)] =
              clusters[static_cast<std::size_t>(digits[static_cast<std::size_t>(s)])];
        const ITIHistory h = iti_from_schedule(sched, ue_count, slots);
        for (std::size_t e = 0; e < eps_grid.size(); ++e) {
          const double a = expected_avg_aoi(h, eps_grid[e]);
          p.min_aoi[e] = std::min(p.min_aoi[e], a);
          p.worst_aoi = std::min(p.worst_aoi, a - report.rr_aoi[e]);
        }
        const StochasticMeasure m = measure_from_iti(h);
        const long k_max = static_cast<long>(
            std::max(m.second_order.size(), rr_m.second_order.size()));
        for (long kappa = 0; kappa < k_max; ++kappa)
          p.worst_dom = std::min(
              p.worst_dom, m.second_order_at(kappa) - rr_m.second_order_at(kappa));
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int wi = 0; wi < workers; ++wi) threads.emplace_back(work, wi);
    for (auto& t : threads) t.join();
  }

  report.schedules_checked = count;
  report.worst_aoi_margin = std::numeric_limits<double>::infinity();
  report.worst_dominance_margin = std::numeric_limits<double>::infinity();
  for (const Partial& p : partials) {
    if (p.min_aoi.empty()) continue;
    report.worst_aoi_margin = std::min(report.worst_aoi_margin, p.worst_aoi);
    report.worst_dominance_margin = std::min(report.worst_dominance_margin, p.worst_dom);
    for (std::size_t e = 0; e < eps_grid.size(); ++e)
      report.min_aoi[e] = std::min(report.min_aoi[e], p.min_aoi[e]);
  }
  const double tol = 1e-9;
  report.pass = report.worst_aoi_margin >= -tol && report.worst_dominance_margin >= -tol;
  return report;
}

}  // namespace aoisched::dominance
