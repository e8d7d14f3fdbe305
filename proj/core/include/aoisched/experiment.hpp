#pragma once

// Monte Carlo experiment driver: seeded replications in parallel, aggregation
// with confidence intervals, sweep handling, and the CSV formats the CLI
// emits. Replication r of master seed s runs on derive_seed(s, r), so every
// experiment is exactly reproducible from (config, master_seed).

#include <string>
#include <vector>

#include "aoisched/config.hpp"
#include "aoisched/sim.hpp"

namespace aoisched {

struct ExperimentStats {
  double aoi_mean = 0.0;
  double aoi_std = 0.0;
  double aoi_ci95 = 0.0;  // half-width
  double per_mean = 0.0;
  double per_std = 0.0;
  double per_ci95 = 0.0;
  int replications = 0;
};

struct ExperimentResult {
  ExperimentStats stats;
  std::vector<MetricsRecord> records;  // in replication order
};

ExperimentStats aggregate(const std::vector<MetricsRecord>& records);

ExperimentResult run_experiment(const SimConfig& cfg, int replications,
                                std::uint64_t master_seed, int parallelism = 0);

struct SweepPoint {
  std::string label;  // swept "key=value", empty without a sweep
  ExperimentConfig config;
  ExperimentResult result;
};

// One experiment per sweep value (a single point when no sweep is set).
std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg);

// CSV bodies; both start with "# config_hash=... master_seed=..." comments.
std::string replication_csv(const ExperimentConfig& cfg,
                            const std::vector<MetricsRecord>& records);
std::string summary_csv(const ExperimentConfig& cfg,
                        const std::vector<SweepPoint>& points);

std::string format_double(double x);  // canonical %.10g

}  // namespace aoisched
