#include "aoisched/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

namespace aoisched {

ExperimentStats aggregate(const std::vector<MetricsRecord>& records) {
  ExperimentStats s;
  s.replications = static_cast<int>(records.size());
  if (records.empty()) return s;
  const double n = static_cast<double>(records.size());
  for (const MetricsRecord& r : records) {
    s.aoi_mean += r.avg_aoi;
    s.per_mean += r.avg_per;
  }
  s.aoi_mean /= n;
  s.per_mean /= n;
  if (records.size() > 1) {
    double va = 0.0, vp = 0.0;
    for (const MetricsRecord& r : records) {
      va += (r.avg_aoi - s.aoi_mean) * (r.avg_aoi - s.aoi_mean);
      vp += (r.avg_per - s.per_mean) * (r.avg_per - s.per_mean);
    }
    s.aoi_std = std::sqrt(va / (n - 1.0));
    s.per_std = std::sqrt(vp / (n - 1.0));
    s.aoi_ci95 = 1.96 * s.aoi_std / std::sqrt(n);
    s.per_ci95 = 1.96 * s.per_std / std::sqrt(n);
  }
  return s;
}

ExperimentResult run_experiment(const SimConfig& cfg, int replications,
                                std::uint64_t master_seed, int parallelism) {
  if (replications < 1)
    throw std::invalid_argument("run_experiment: replications must be >= 1");
  cfg.validate();

  ExperimentResult result;
  result.records.resize(static_cast<std::size_t>(replications));

  int workers = parallelism > 0 ? parallelism
                                : static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = std::min(workers, replications);

  std::atomic<int> next{0};
  auto work = [&] {
    for (;;) {
      const int r = next.fetch_add(1);
      if (r >= replications) break;
      result.records[static_cast<std::size_t>(r)] =
          run_replication(cfg, derive_seed(master_seed, static_cast<std::uint64_t>(r)));
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) threads.emplace_back(work);
    for (auto& t : threads) t.join();
  }
  result.stats = aggregate(result.records);
  return result;
}

std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg) {
  std::vector<SweepPoint> points;
  if (!cfg.sweep) {
    SweepPoint p;
    p.config = cfg;
    p.result = run_experiment(resolve_sim_config(cfg), cfg.replications,
                              cfg.master_seed, cfg.parallelism);
    points.push_back(std::move(p));
    return points;
  }
  for (const std::string& value : cfg.sweep->values) {
    SweepPoint p;
    p.config = cfg;
    p.config.sweep.reset();
    set_config_value(p.config, cfg.sweep->key, value);
    p.label = cfg.sweep->key + "=" + value;
    p.result = run_experiment(resolve_sim_config(p.config), p.config.replications,
                              p.config.master_seed, p.config.parallelism);
    points.push_back(std::move(p));
  }
  return points;
}

std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

namespace {

std::string reproducibility_header(const ExperimentConfig& cfg) {
  std::ostringstream o;
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(config_hash(cfg)));
  o << "# config_hash=" << hash << "\n";
  o << "# master_seed=" << cfg.master_seed << "\n";
  return o.str();
}

}  // namespace

std::string replication_csv(const ExperimentConfig& cfg,
                            const std::vector<MetricsRecord>& records) {
  std::ostringstream o;
  o << reproducibility_header(cfg);
  o << "replication,seed,avg_aoi_symbols,avg_per,slots\n";
  for (std::size_t r = 0; r < records.size(); ++r) {
    const MetricsRecord& m = records[r];
    o << r << "," << m.seed << "," << format_double(m.avg_aoi) << ","
      << format_double(m.avg_per) << "," << m.slots << "\n";
  }
  return o.str();
}

std::string summary_csv(const ExperimentConfig& cfg,
                        const std::vector<SweepPoint>& points) {
  std::ostringstream o;
  o << reproducibility_header(cfg);
  o << "sweep,avg_aoi_symbols_mean,avg_aoi_symbols_std,avg_aoi_symbols_ci95,"
       "avg_per_mean,avg_per_std,avg_per_ci95,replications\n";
  for (const SweepPoint& p : points) {
    const ExperimentStats& s = p.result.stats;
    o << p.label << "," << format_double(s.aoi_mean) << "," << format_double(s.aoi_std)
      << "," << format_double(s.aoi_ci95) << "," << format_double(s.per_mean) << ","
      << format_double(s.per_std) << "," << format_double(s.per_ci95) << ","
      << s.replications << "\n";
  }
  return o.str();
}

}  // namespace aoisched
