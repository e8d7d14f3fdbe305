#pragma once

// Slot-by-slot simulator: scheduler -> sub-carrier assignment -> channel ->
// Bernoulli delivery -> AoI update, with metric accumulation after a
// warm-up transient.

#include <cstdint>
#include <memory>
#include <vector>

#include "aoisched/assignment.hpp"
#include "aoisched/channel.hpp"
#include "aoisched/rng.hpp"
#include "aoisched/scheduler.hpp"

namespace aoisched {

enum class AssignMode { UniformBlind, RecursiveCsi };
enum class ChannelKind { Flat, Faded };

std::string to_string(AssignMode m);
AssignMode parse_assign_mode(const std::string& s);

struct SimConfig {
  int ue_count = 100;       // I
  int subcarriers = 100;    // M
  int blocklength = 1;      // n
  int payload_bits = 32;    // tau
  Policy policy = Policy::ClusteredRR;
  int cluster_size = 1;     // resolved l, 1 <= l <= min(I, M)
  AssignMode assign_mode = AssignMode::UniformBlind;
  ChannelKind channel_kind = ChannelKind::Faded;
  ChannelConfig channel;
  long slots = 10000;       // measured slots after warm-up
  long warmup = -1;         // -1: auto = 10 * ceil(I/l)

  long resolved_warmup() const;
  void validate() const;
};

struct MetricsRecord {
  double avg_aoi = 0.0;  // symbols; time average of the per-slot UE mean
  double avg_per = 0.0;  // failed / attempted transmissions
  std::vector<double> per_ue_aoi;
  long slots = 0;
  std::uint64_t seed = 0;
};

class Simulation {
 public:
  Simulation(const SimConfig& cfg, std::uint64_t seed);

  void step();  // one slot
  MetricsRecord run();  // warm-up + measured slots

  long slot() const { return slot_; }
  const std::vector<double>& aoi() const { return aoi_; }
  const ChannelModel& channel() const { return *channel_; }
  const std::vector<double>& estimated_per() const { return est_per_; }

 private:
  void refresh_per_estimates();
  std::vector<int> select_cluster();
  AssignmentMatrix assign(const std::vector<int>& cluster);

  SimConfig cfg_;
  Rng rng_;
  std::unique_ptr<ChannelModel> channel_;
  SchedulerState sched_;
  std::vector<double> aoi_;       // h_i, symbols
  std::vector<double> est_per_;   // AoI-index PER estimates
  std::vector<char> in_cluster_;  // scratch
  long slot_ = 0;
  long warmup_ = 0;

  // accumulators (active once slot_ > warmup_)
  double aoi_time_sum_ = 0.0;
  std::vector<double> per_ue_sum_;
  long measured_slots_ = 0;
  std::uint64_t attempts_ = 0;
  std::uint64_t failures_ = 0;
  std::uint64_t seed_ = 0;

  // scratch buffers for the per-slot pipeline
  SnrTable snr_scratch_;
  std::vector<std::vector<LinkQuality>> links_scratch_;  // per cluster slot
};

MetricsRecord run_replication(const SimConfig& cfg, std::uint64_t seed);

}  // namespace aoisched
