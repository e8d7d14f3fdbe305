// Experiment driver for the AoI scheduling library.
//
// Subcommands
//   cluster-size     closed-form optimal cluster size, optional integer-search
//                    oracle comparison and parameter sweeps
//   simulate         Monte Carlo experiments from a config file, CSV output
//   benchmark        the three-policy clustering comparison preset
//   dominance-check  exhaustive round-robin optimality verification
//   assign           one-shot sub-carrier assignment debug
//
// Exit codes: 0 success/pass, 1 assertion or acceptance failure, 2 config error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aoisched/cluster.hpp"
#include "aoisched/config.hpp"
#include "aoisched/dominance.hpp"
#include "aoisched/experiment.hpp"

namespace {

using namespace aoisched;

// --sweep M=200..2000:100  or  --sweep tau=32,64,128
struct SweepValues {
  std::string key;
  std::vector<double> values;
};

SweepValues parse_cli_sweep(const std::string& text) {
  const std::size_t eq = text.find('=');
  if (eq == std::string::npos)
    throw ConfigError("--sweep expects key=lo..hi[:step] or key=v1,v2,...");
  SweepValues out;
  out.key = text.substr(0, eq);
  const std::string rest = text.substr(eq + 1);
  const std::size_t dots = rest.find("..");
  if (dots != std::string::npos) {
    const std::size_t colon = rest.find(':', dots + 2);
    const double lo = std::stod(rest.substr(0, dots));
    const double hi = colon == std::string::npos
                          ? std::stod(rest.substr(dots + 2))
                          : std::stod(rest.substr(dots + 2, colon - dots - 2));
    double step = colon == std::string::npos ? (hi - lo) / 19.0
                                             : std::stod(rest.substr(colon + 1));
    if (step <= 0.0) step = 1.0;
    for (double v = lo; v <= hi + 1e-9 * std::abs(hi); v += step) out.values.push_back(v);
  } else {
    std::stringstream ss(rest);
    std::string item;
    while (std::getline(ss, item, ',')) if (!item.empty()) out.values.push_back(std::stod(item));
  }
  if (out.values.empty()) throw ConfigError("--sweep produced no values");
  return out;
}

void apply_sweep_key(ExperimentConfig& cfg, const std::string& key, double v) {
  if (key == "M" || key == "subcarriers")
    cfg.subcarriers = static_cast<int>(std::lround(v));
  else if (key == "tau" || key == "payload_bits")
    cfg.payload_bits = static_cast<int>(std::lround(v));
  else if (key == "gamma_db" || key == "snr_db")
    cfg.channel.reference_snr_db = v;
  else if (key == "n" || key == "blocklength")
    cfg.blocklength = static_cast<int>(std::lround(v));
  else if (key == "I" || key == "ue_count")
    cfg.ue_count = static_cast<int>(std::lround(v));
  else
    throw ConfigError("unknown sweep key: " + key +
                      " (expected M, tau, gamma_db, n or I)");
}

void write_text(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << body;
}

std::string sanitize(const std::string& label) {
  std::string out;
  for (char c : label)
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out.empty() ? "point" : out;
}

// ---------------------------------------------------------------- cluster-size

int cmd_cluster_size(const std::string& config_path, bool oracle,
                     const std::string& sweep_text, const std::string& csv_path) {
  ExperimentConfig base = parse_config_file(config_path);

  std::vector<std::pair<std::string, ExperimentConfig>> points;
  if (sweep_text.empty()) {
    points.emplace_back("", base);
  } else {
    const SweepValues sweep = parse_cli_sweep(sweep_text);
    for (double v : sweep.values) {
      ExperimentConfig cfg = base;
      apply_sweep_key(cfg, sweep.key, v);
      points.emplace_back(sweep.key + "=" + format_double(v), cfg);
    }
  }

  std::ostringstream csv;
  csv << "sweep,l_real,l_int,delta,w,beta_opt,eps_uni,predicted_avg_aoi_symbols";
  if (oracle) csv << ",oracle_l,agreement";
  csv << "\n";

  bool all_agree = true;
  for (const auto& [label, cfg] : points) {
    const ClusterOptInput in = cluster_opt_input(cfg);
    const ClusterOptResult res = optimal_cluster_size(in);
    // The closed form knows nothing of the population; deployments cap the
    // cluster at min(I, M).
    const int l_eff = std::min(res.l_int, std::min(cfg.ue_count, cfg.subcarriers));
    const double predicted = rr_average_aoi(
        uniform_eps(in, l_eff), cfg.blocklength,
        static_cast<double>(cfg.ue_count) / l_eff, 1.0);
    if (label.empty()) {
      std::cout << "l_real            = " << format_double(res.l_real) << "\n"
                << "l_int             = " << res.l_int << "\n"
                << "delta             = " << format_double(res.delta) << "\n"
                << "w (Lambert W_-1)  = " << format_double(res.w) << "\n"
                << "beta_opt          = " << format_double(res.beta_opt) << "\n"
                << "predicted eps_uni = " << format_double(res.eps_uni) << "\n"
                << "predicted avg AoI = " << format_double(predicted) << " symbols"
                << (l_eff != res.l_int ? " (cluster capped at min(I, M))" : "") << "\n";
      if (res.high_per_warning)
        std::cout << "warning: predicted eps_uni > 0.3, the closed form is strained\n";
    }
    csv << label << "," << format_double(res.l_real) << "," << res.l_int << ","
        << format_double(res.delta) << "," << format_double(res.w) << ","
        << format_double(res.beta_opt) << "," << format_double(res.eps_uni) << ","
        << format_double(predicted);
    if (oracle) {
      const int best = exhaustive_cluster_search(in, cfg.ue_count);
      const bool agree = std::abs(best - l_eff) <= 1;
      all_agree = all_agree && agree;
      if (label.empty())
        std::cout << "integer-search oracle = " << best << " ("
                  << (agree ? "agreement within +-1" : "MISMATCH") << ")\n";
      csv << "," << best << "," << (agree ? "ok" : "mismatch");
    }
    csv << "\n";
  }

  if (!csv_path.empty()) write_text(csv_path, csv.str());
  else if (!sweep_text.empty()) std::cout << csv.str();
  return all_agree ? 0 : 1;
}

// ------------------------------------------------------------------- simulate

int cmd_simulate(const std::string& config_path, const std::string& out_dir) {
  const ExperimentConfig cfg = parse_config_file(config_path);
  const std::vector<SweepPoint> points = run_sweep(cfg);

  std::filesystem::create_directories(out_dir);
  for (std::size_t p = 0; p < points.size(); ++p) {
    const std::string name = points[p].label.empty()
                                 ? std::string("replications.csv")
                                 : "replications_" + sanitize(points[p].label) + ".csv";
    write_text(out_dir + "/" + name,
               replication_csv(points[p].config, points[p].result.records));
  }
  const std::string summary = summary_csv(cfg, points);
  write_text(out_dir + "/summary.csv", summary);
  std::cout << summary;
  return 0;
}

// ------------------------------------------------------------------ benchmark

int cmd_benchmark(const std::string& config_path, const std::string& out_dir) {
  const ExperimentConfig base = parse_config_file(config_path);
  std::vector<SweepPoint> points;
  for (Policy policy :
       {Policy::ClusteredRR, Policy::NoClustering, Policy::UrllcBaseline}) {
    SweepPoint p;
    p.config = base;
    p.config.sweep.reset();
    p.config.policy = policy;
    p.config.cluster_size = 0;  // resolved per policy
    p.config.assign_mode = AssignMode::UniformBlind;
    p.label = to_string(policy);
    const SimConfig sim = resolve_sim_config(p.config);
    p.result = run_experiment(sim, p.config.replications, p.config.master_seed,
                              p.config.parallelism);
    std::cout << to_string(policy) << ": l=" << sim.cluster_size
              << " avg_aoi=" << format_double(p.result.stats.aoi_mean)
              << " (ci95 +-" << format_double(p.result.stats.aoi_ci95) << ")"
              << " avg_per=" << format_double(p.result.stats.per_mean) << "\n";
    points.push_back(std::move(p));
  }
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    write_text(out_dir + "/benchmark.csv", summary_csv(base, points));
  }
  return 0;
}

// ------------------------------------------------------------- dominance-check

int cmd_dominance_check(int ue_count, int cluster_size, int slots,
                        const std::string& eps_text, const std::string& csv_path) {
  std::vector<double> eps_grid;
  std::stringstream ss(eps_text);
  std::string item;
  while (std::getline(ss, item, ',')) if (!item.empty()) eps_grid.push_back(std::stod(item));
  if (eps_grid.empty()) throw ConfigError("--eps produced no values");

  dominance::RrOptimalityReport report;
  try {
    report = dominance::verify_rr_optimality(ue_count, cluster_size, slots, eps_grid);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  std::cout << "schedules checked: " << report.schedules_checked << "\n";
  for (std::size_t e = 0; e < eps_grid.size(); ++e)
    std::cout << "eps=" << format_double(eps_grid[e])
              << "  rr_avg_aoi=" << format_double(report.rr_aoi[e])
              << "  min_avg_aoi=" << format_double(report.min_aoi[e]) << "\n";
  std::cout << "worst AoI margin:        " << format_double(report.worst_aoi_margin)
            << "\n";
  std::cout << "worst dominance margin:  "
            << format_double(report.worst_dominance_margin) << "\n";
  std::cout << (report.pass ? "PASS" : "FAIL")
            << ": round-robin minimizes the expected average AoI and "
               "second-order dominates every schedule\n";

  if (!csv_path.empty()) {
    if (report.schedules_checked > 100000)
      throw ConfigError("--csv limited to spaces of at most 1e5 schedules");
    std::ostringstream csv;
    csv << "schedule";
    for (double e : eps_grid) csv << ",avg_aoi_eps_" << format_double(e);
    csv << "\n";
    // re-enumerate the space for the per-schedule dump
    std::vector<std::vector<int>> clusters;
    {
      std::vector<int> cur(static_cast<std::size_t>(cluster_size));
      for (int j = 0; j < cluster_size; ++j) cur[static_cast<std::size_t>(j)] = j;
      for (;;) {
        clusters.push_back(cur);
        int j = cluster_size - 1;
        while (j >= 0 && cur[static_cast<std::size_t>(j)] == ue_count - cluster_size + j) --j;
        if (j < 0) break;
        ++cur[static_cast<std::size_t>(j)];
        for (int j2 = j + 1; j2 < cluster_size; ++j2)
          cur[static_cast<std::size_t>(j2)] = cur[static_cast<std::size_t>(j2 - 1)] + 1;
      }
    }
    dominance::Schedule sched(static_cast<std::size_t>(slots));
    for (long idx = 0; idx < report.schedules_checked; ++idx) {
      long v = idx;
      std::string name;
      for (int s = 0; s < slots; ++s) {
        const long d = v % static_cast<long>(clusters.size());
        v /= static_cast<long>(clusters.size());
        sched[static_cast<std::size_t>(s)] = clusters[static_cast<std::size_t>(d)];
        name += (s ? "|" : "");
        for (std::size_t j = 0; j < sched[static_cast<std::size_t>(s)].size(); ++j)
          name += (j ? "+" : "") + std::to_string(sched[static_cast<std::size_t>(s)][j]);
      }
      const dominance::ITIHistory h =
          dominance::iti_from_schedule(sched, ue_count, slots);
      csv << name;
      for (double e : eps_grid) csv << "," << format_double(dominance::expected_avg_aoi(h, e));
      csv << "\n";
    }
    write_text(csv_path, csv.str());
  }
  return report.pass ? 0 : 1;
}

// --------------------------------------------------------------------- assign

int cmd_assign(int subcarriers, int cluster_size, const std::string& mode,
               double snr_db, double sigma_db, int blocklength, int payload_bits,
               std::uint64_t seed) {
  Rng rng(seed);
  SnrTable table = SnrTable::zeros(subcarriers, cluster_size);
  if (sigma_db > 0.0) {
    ChannelConfig ch;
    ch.reference_snr_db = snr_db;
    ch.shadowing_sigma_db = sigma_db;
    FadedChannel faded(ch, subcarriers, cluster_size, blocklength, rng);
    for (int m = 0; m < subcarriers; ++m)
      for (int i = 0; i < cluster_size; ++i) table(m, i) = faded.snr(m, i);
  } else {
    const double snr = std::pow(10.0, snr_db / 10.0);
    for (double& v : table.values) v = snr;
  }

  AssignmentMatrix blind = uniform_blind_assign(subcarriers, cluster_size, rng);
  const AssignMode assign_mode = parse_assign_mode(mode);

  const auto print_assignment = [&](const AssignmentMatrix& a, const char* tag) {
    std::cout << tag << " owners:";
    for (int m = 0; m < a.subcarriers(); ++m) std::cout << " " << a.owner_of(m);
    std::cout << "\n" << tag << " counts:";
    for (int c : a.per_ue_counts()) std::cout << " " << c;
    std::cout << "\n";
    const std::vector<int> lacking = capacity_shortfall(
        a, std::pow(10.0, snr_db / 10.0), blocklength, payload_bits);
    if (!lacking.empty()) {
      std::cout << "warning: payload exceeds average-gain capacity for UE slots:";
      for (int i : lacking) std::cout << " " << i;
      std::cout << "\n";
    }
  };

  if (assign_mode == AssignMode::UniformBlind) {
    print_assignment(blind, "uniform_blind");
    return 0;
  }
  const RecursiveAssignResult res =
      recursive_assign(table, blocklength, payload_bits, std::move(blind));
  print_assignment(res.assignment, "recursive_csi");
  std::cout << "iterations: " << res.iterations << "\n"
            << "sum_eps: " << format_double(res.initial_sum_eps) << " -> "
            << format_double(res.final_sum_eps) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blind OFDMA scheduling for information freshness"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "aoisched_out", csv_path, sweep_text;
  bool oracle = false;

  CLI::App* cluster = app.add_subcommand(
      "cluster-size", "closed-form optimal cluster size from minimal knowledge");
  cluster->add_option("--config", config_path, "config file")->required();
  cluster->add_flag("--oracle", oracle, "compare against the integer search");
  cluster->add_option("--sweep", sweep_text, "key=lo..hi[:step] or key=v1,v2,...");
  cluster->add_option("--csv", csv_path, "write the sweep table to a file");

  CLI::App* simulate = app.add_subcommand("simulate", "run Monte Carlo experiments");
  simulate->add_option("--config", config_path, "config file")->required();
  simulate->add_option("--out-dir", out_dir, "output directory for CSV files");

  CLI::App* benchmark = app.add_subcommand(
      "benchmark", "three-policy clustering comparison (optimal, l=1, URLLC)");
  benchmark->add_option("--config", config_path, "config file")->required();
  benchmark->add_option("--out-dir", out_dir, "output directory for CSV files");

  int dc_ue = 2, dc_l = 1, dc_slots = 6;
  std::string dc_eps = "0.1,0.3,0.5,0.7,0.9";
  CLI::App* dom = app.add_subcommand(
      "dominance-check", "exhaustively verify round-robin optimality");
  dom->add_option("--ue-count", dc_ue, "number of UEs")->required();
  dom->add_option("--cluster-size", dc_l, "cluster size l");
  dom->add_option("--slots", dc_slots, "schedule length T")->required();
  dom->add_option("--eps", dc_eps, "comma-separated PER grid");
  dom->add_option("--csv", csv_path, "per-schedule objective dump");

  int as_m = 12, as_l = 3, as_n = 1, as_tau = 16;
  double as_snr = 5.0, as_sigma = 0.0;
  std::uint64_t as_seed = 1;
  std::string as_mode = "uniform_blind";
  CLI::App* assign = app.add_subcommand("assign", "one-shot assignment debug");
  assign->add_option("--subcarriers,-M", as_m, "sub-carrier count");
  assign->add_option("--cluster-size,-l", as_l, "cluster size");
  assign->add_option("--mode", as_mode, "uniform_blind or recursive_csi");
  assign->add_option("--snr-db", as_snr, "reference SNR in dB");
  assign->add_option("--sigma-db", as_sigma, "shadowing sigma (0 = flat table)");
  assign->add_option("--blocklength,-n", as_n, "symbols per slot");
  assign->add_option("--payload-bits", as_tau, "payload bits");
  assign->add_option("--seed", as_seed, "rng seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    if (cluster->parsed())
      return cmd_cluster_size(config_path, oracle, sweep_text, csv_path);
    if (simulate->parsed()) return cmd_simulate(config_path, out_dir);
    if (benchmark->parsed()) return cmd_benchmark(config_path, out_dir);
    if (dom->parsed())
      return cmd_dominance_check(dc_ue, dc_l, dc_slots, dc_eps, csv_path);
    if (assign->parsed())
      return cmd_assign(as_m, as_l, as_mode, as_snr, as_sigma, as_n, as_tau, as_seed);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const InfeasiblePayloadError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const RegimeError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
