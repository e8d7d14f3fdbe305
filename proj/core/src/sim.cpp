#include "aoisched/sim.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace aoisched {

std::string to_string(AssignMode m) {
  switch (m) {
    case AssignMode::UniformBlind: return "uniform_blind";
    case AssignMode::RecursiveCsi: return "recursive_csi";
  }
  throw std::invalid_argument("to_string: bad assignment mode");
}

AssignMode parse_assign_mode(const std::string& s) {
  if (s == "uniform_blind") return AssignMode::UniformBlind;
  if (s == "recursive_csi") return AssignMode::RecursiveCsi;
  throw std::invalid_argument("unknown assignment mode: " + s);
}

long SimConfig::resolved_warmup() const {
  if (warmup >= 0) return warmup;
  return 10 * ((ue_count + cluster_size - 1) / cluster_size);
}

void SimConfig::validate() const {
  if (ue_count < 1 || subcarriers < 1 || blocklength < 1 || payload_bits < 1)
    throw std::invalid_argument("SimConfig: system dimensions must be >= 1");
  if (cluster_size < 1 || cluster_size > std::min(ue_count, subcarriers))
    throw std::invalid_argument("SimConfig: need 1 <= cluster_size <= min(I, M)");
  if (slots < 1) throw std::invalid_argument("SimConfig: slots must be >= 1");
  if (channel_kind == ChannelKind::Faded) channel.validate();
}

Simulation::Simulation(const SimConfig& cfg, std::uint64_t seed)
    : cfg_(cfg), rng_(seed), seed_(seed) {
  cfg_.validate();
  if (cfg_.channel_kind == ChannelKind::Flat) {
    channel_ = std::make_unique<FlatChannel>(cfg_.channel.reference_snr_db,
                                             cfg_.subcarriers, cfg_.ue_count);
  } else {
    channel_ = std::make_unique<FadedChannel>(cfg_.channel, cfg_.subcarriers,
                                              cfg_.ue_count, cfg_.blocklength, rng_);
  }
  sched_.policy = cfg_.policy;
  sched_.cluster_size = cfg_.cluster_size;
  aoi_.assign(static_cast<std::size_t>(cfg_.ue_count), 0.0);
  per_ue_sum_.assign(static_cast<std::size_t>(cfg_.ue_count), 0.0);
  in_cluster_.assign(static_cast<std::size_t>(cfg_.ue_count), 0);
  warmup_ = cfg_.resolved_warmup();

  est_per_.assign(static_cast<std::size_t>(cfg_.ue_count), 0.0);
  refresh_per_estimates();
  snr_scratch_ = SnrTable::zeros(cfg_.subcarriers, cfg_.cluster_size);
  links_scratch_.resize(static_cast<std::size_t>(cfg_.cluster_size));
  for (auto& links : links_scratch_)
    links.reserve(static_cast<std::size_t>(cfg_.subcarriers));
}

// Scheduling-stage PER estimates: the uniform floor(M/l)-carrier share
// evaluated at each UE's current wideband RSSI (no per-carrier resolution).
void Simulation::refresh_per_estimates() {
  const int b_est = cfg_.subcarriers / cfg_.cluster_size;
  for (int i = 0; i < cfg_.ue_count; ++i)
    est_per_[static_cast<std::size_t>(i)] = packet_error_rate_uniform(
        channel_->rssi_snr(i), b_est, cfg_.blocklength, cfg_.payload_bits);
}

std::vector<int> Simulation::select_cluster() {
  switch (cfg_.policy) {
    case Policy::ClusteredRR:
    case Policy::NoClustering:
    case Policy::UrllcBaseline:
      return next_cluster_rr(sched_, cfg_.ue_count);
    case Policy::AoiIndex:
      refresh_per_estimates();
      return next_cluster_aoi_index({aoi_, est_per_}, cfg_.cluster_size);
    case Policy::Random:
      return next_cluster_random(rng_, cfg_.ue_count, cfg_.cluster_size);
  }
  throw std::invalid_argument("Simulation: bad policy");
}

AssignmentMatrix Simulation::assign(const std::vector<int>& cluster) {
  AssignmentMatrix blind =
      uniform_blind_assign(cfg_.subcarriers, cfg_.cluster_size, rng_);
  if (cfg_.assign_mode == AssignMode::UniformBlind) return blind;
  for (int m = 0; m < cfg_.subcarriers; ++m)
    for (int j = 0; j < cfg_.cluster_size; ++j)
      snr_scratch_(m, j) = channel_->snr(m, cluster[static_cast<std::size_t>(j)]);
  return recursive_assign(snr_scratch_, cfg_.blocklength, cfg_.payload_bits,
                          std::move(blind))
      .assignment;
}

void Simulation::step() {
  const std::vector<int> cluster = select_cluster();
  const AssignmentMatrix assignment = assign(cluster);
  const double n = cfg_.blocklength;

  std::fill(in_cluster_.begin(), in_cluster_.end(), 0);
  const bool measure = slot_ >= warmup_;

  for (auto& links : links_scratch_) links.clear();
  for (int m = 0; m < cfg_.subcarriers; ++m) {
    const int j = assignment.owner_of(m);
    links_scratch_[static_cast<std::size_t>(j)].push_back(
        LinkQuality::from_snr(channel_->snr(m, cluster[static_cast<std::size_t>(j)])));
  }

  for (int j = 0; j < cfg_.cluster_size; ++j) {
    const int ue = cluster[static_cast<std::size_t>(j)];
    in_cluster_[static_cast<std::size_t>(ue)] = 1;
    const double eps = packet_error_rate(links_scratch_[static_cast<std::size_t>(j)],
                                         cfg_.blocklength, cfg_.payload_bits);
    const bool success = rng_.uniform01() >= eps;
    if (success)
      aoi_[static_cast<std::size_t>(ue)] = n;
    else
      aoi_[static_cast<std::size_t>(ue)] += n;
    if (measure) {
      ++attempts_;
      if (!success) ++failures_;
    }
  }
  for (int i = 0; i < cfg_.ue_count; ++i)
    if (!in_cluster_[static_cast<std::size_t>(i)]) aoi_[static_cast<std::size_t>(i)] += n;

#ifndef NDEBUG
  // Sample paths must stay on the n-grid: h = n after a delivery, h += n
  // otherwise.
  for (int i = 0; i < cfg_.ue_count; ++i) {
    assert(aoi_[static_cast<std::size_t>(i)] >= n);
    assert(std::fmod(aoi_[static_cast<std::size_t>(i)], n) == 0.0);
  }
#endif

  if (measure) {
    double mean = 0.0;
    for (int i = 0; i < cfg_.ue_count; ++i) {
      mean += aoi_[static_cast<std::size_t>(i)];
      per_ue_sum_[static_cast<std::size_t>(i)] += aoi_[static_cast<std::size_t>(i)];
    }
    aoi_time_sum_ += mean / cfg_.ue_count;
    ++measured_slots_;
  }

  channel_->step(rng_);
  ++slot_;
}

MetricsRecord Simulation::run() {
  const long total = warmup_ + cfg_.slots;
  while (slot_ < total) step();

  MetricsRecord rec;
  rec.slots = measured_slots_;
  rec.seed = seed_;
  rec.avg_aoi = aoi_time_sum_ / static_cast<double>(measured_slots_);
  rec.avg_per = attempts_ > 0
                    ? static_cast<double>(failures_) / static_cast<double>(attempts_)
                    : 0.0;
  rec.per_ue_aoi.resize(per_ue_sum_.size());
  for (std::size_t i = 0; i < per_ue_sum_.size(); ++i)
    rec.per_ue_aoi[i] = per_ue_sum_[i] / static_cast<double>(measured_slots_);
  return rec;
}

MetricsRecord run_replication(const SimConfig& cfg, std::uint64_t seed) {
  Simulation sim(cfg, seed);
  return sim.run();
}

}  // namespace aoisched
