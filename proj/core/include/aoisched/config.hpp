#pragma once

// Experiment configuration: a flat-sectioned key/value file, canonical
// serialization (parse -> serialize -> parse is the identity), a stable hash
// for reproducibility headers, and resolution into a runnable SimConfig.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "aoisched/sim.hpp"

namespace aoisched {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SweepSpec {
  std::string key;                  // dotted, e.g. channel.shadowing_sigma_db
  std::vector<std::string> values;  // applied through the typed setter
};

struct ExperimentConfig {
  // [system]
  int ue_count = 100;
  int subcarriers = 100;
  int blocklength = 1;
  int payload_bits = 32;

  // [channel]
  ChannelKind channel_model = ChannelKind::Faded;
  ChannelConfig channel;

  // [scheduler]
  Policy policy = Policy::ClusteredRR;
  int cluster_size = 0;  // 0 = auto (Lambert-W optimum at the reference SNR)
  double urllc_target_per = 1e-5;
  double urllc_max_delay_s = 1e-3;

  // [assignment]
  AssignMode assign_mode = AssignMode::UniformBlind;

  // [run]
  long slots = 10000;
  int replications = 100;
  std::uint64_t master_seed = 1;
  long warmup = -1;  // -1 = auto
  int parallelism = 0;

  // [sweep]
  std::optional<SweepSpec> sweep;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);
std::uint64_t config_hash(const ExperimentConfig& cfg);

// Typed assignment through a dotted key ("section.key"); used by sweeps.
void set_config_value(ExperimentConfig& cfg, const std::string& dotted_key,
                      const std::string& value);

// Resolves policy-dependent cluster size (auto via the closed-form optimum,
// no_clustering pinned at 1, urllc_baseline via its sizing rule) and
// validates against the system dimensions.
SimConfig resolve_sim_config(const ExperimentConfig& cfg);

// The ClusterOptInput the blind optimizer sees for this configuration
// (reference SNR, frequency-flat).
ClusterOptInput cluster_opt_input(const ExperimentConfig& cfg);

}  // namespace aoisched
