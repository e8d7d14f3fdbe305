#include "aoisched/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace aoisched {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

int parse_int(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<int>(x);
  } catch (const std::exception&) {
    throw ConfigError("invalid integer for " + key + ": '" + v + "'");
  }
}

long parse_long(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<long>(x);
  } catch (const std::exception&) {
    throw ConfigError("invalid integer for " + key + ": '" + v + "'");
  }
}

std::uint64_t parse_u64(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const unsigned long long x = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return static_cast<std::uint64_t>(x);
  } catch (const std::exception&) {
    throw ConfigError("invalid unsigned integer for " + key + ": '" + v + "'");
  }
}

double parse_double(const std::string& v, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("invalid number for " + key + ": '" + v + "'");
  }
}

bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ConfigError("invalid boolean for " + key + ": '" + v + "'");
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void set_value(ExperimentConfig& c, const std::string& section, const std::string& key,
               const std::string& value) {
  const std::string full = section + "." + key;
  if (section == "system") {
    if (key == "ue_count") c.ue_count = parse_int(value, full);
    else if (key == "subcarriers") c.subcarriers = parse_int(value, full);
    else if (key == "blocklength") c.blocklength = parse_int(value, full);
    else if (key == "payload_bits") c.payload_bits = parse_int(value, full);
    else throw ConfigError("unknown key: " + full);
  } else if (section == "channel") {
    if (key == "model") {
      if (value == "flat") c.channel_model = ChannelKind::Flat;
      else if (value == "faded") c.channel_model = ChannelKind::Faded;
      else throw ConfigError("channel.model must be flat or faded, got '" + value + "'");
    } else if (key == "reference_snr_db") c.channel.reference_snr_db = parse_double(value, full);
    else if (key == "shadowing_sigma_db") c.channel.shadowing_sigma_db = parse_double(value, full);
    else if (key == "rayleigh_mean_duration_s") c.channel.rayleigh_mean_duration_s = parse_double(value, full);
    else if (key == "coherence_bandwidth_hz") c.channel.coherence_bandwidth_hz = parse_double(value, full);
    else if (key == "rayleigh_scale") c.channel.rayleigh_scale = parse_double(value, full);
    else if (key == "subcarrier_bandwidth_hz") c.channel.subcarrier_bandwidth_hz = parse_double(value, full);
    else if (key == "symbol_duration_s") c.channel.symbol_duration_s = parse_double(value, full);
    else if (key == "rayleigh_enabled") c.channel.rayleigh_enabled = parse_bool(value, full);
    else throw ConfigError("unknown key: " + full);
  } else if (section == "scheduler") {
    if (key == "policy") {
      try {
        c.policy = parse_policy(value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    } else if (key == "cluster_size") {
      if (value == "auto") c.cluster_size = 0;
      else {
        c.cluster_size = parse_int(value, full);
        if (c.cluster_size < 1)
          throw ConfigError("scheduler.cluster_size must be 'auto' or >= 1");
      }
    } else if (key == "urllc_target_per") c.urllc_target_per = parse_double(value, full);
    else if (key == "urllc_max_delay_s") c.urllc_max_delay_s = parse_double(value, full);
    else throw ConfigError("unknown key: " + full);
  } else if (section == "assignment") {
    if (key == "mode") {
      try {
        c.assign_mode = parse_assign_mode(value);
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    } else throw ConfigError("unknown key: " + full);
  } else if (section == "run") {
    if (key == "slots") c.slots = parse_long(value, full);
    else if (key == "replications") c.replications = parse_int(value, full);
    else if (key == "master_seed") c.master_seed = parse_u64(value, full);
    else if (key == "warmup") {
      if (value == "auto") c.warmup = -1;
      else c.warmup = parse_long(value, full);
    } else if (key == "parallelism") c.parallelism = parse_int(value, full);
    else throw ConfigError("unknown key: " + full);
  } else if (section == "sweep") {
    if (!c.sweep) c.sweep.emplace();
    if (key == "key") c.sweep->key = value;
    else if (key == "values") {
      c.sweep->values.clear();
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) c.sweep->values.push_back(item);
      }
      if (c.sweep->values.empty()) throw ConfigError("sweep.values is empty");
    } else throw ConfigError("unknown key: " + full);
  } else {
    throw ConfigError("unknown section: [" + section + "]");
  }
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::set<std::string> seen;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty())
      throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
    const std::string full = section + "." + key;
    if (!seen.insert(full).second)
      throw ConfigError("duplicate key: " + full);
    set_value(cfg, section, key, value);
  }
  if (cfg.sweep) {
    if (cfg.sweep->key.empty()) throw ConfigError("sweep.key missing");
    if (cfg.sweep->values.empty()) throw ConfigError("sweep.values missing");
    // Validate the swept key resolves to something settable.
    ExperimentConfig probe = cfg;
    set_config_value(probe, cfg.sweep->key, cfg.sweep->values.front());
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

void set_config_value(ExperimentConfig& cfg, const std::string& dotted_key,
                      const std::string& value) {
  const std::size_t dot = dotted_key.find('.');
  if (dot == std::string::npos)
    throw ConfigError("expected section.key, got '" + dotted_key + "'");
  const std::string section = dotted_key.substr(0, dot);
  if (section == "sweep") throw ConfigError("cannot sweep over [sweep] keys");
  set_value(cfg, section, dotted_key.substr(dot + 1), value);
}

std::string serialize_config(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "[system]\n";
  o << "ue_count = " << c.ue_count << "\n";
  o << "subcarriers = " << c.subcarriers << "\n";
  o << "blocklength = " << c.blocklength << "\n";
  o << "payload_bits = " << c.payload_bits << "\n";
  o << "\n[channel]\n";
  o << "model = " << (c.channel_model == ChannelKind::Flat ? "flat" : "faded") << "\n";
  o << "reference_snr_db = " << fmt_double(c.channel.reference_snr_db) << "\n";
  o << "shadowing_sigma_db = " << fmt_double(c.channel.shadowing_sigma_db) << "\n";
  o << "rayleigh_mean_duration_s = " << fmt_double(c.channel.rayleigh_mean_duration_s) << "\n";
  o << "coherence_bandwidth_hz = " << fmt_double(c.channel.coherence_bandwidth_hz) << "\n";
  o << "rayleigh_scale = " << fmt_double(c.channel.rayleigh_scale) << "\n";
  o << "subcarrier_bandwidth_hz = " << fmt_double(c.channel.subcarrier_bandwidth_hz) << "\n";
  o << "symbol_duration_s = " << fmt_double(c.channel.symbol_duration_s) << "\n";
  o << "rayleigh_enabled = " << (c.channel.rayleigh_enabled ? "true" : "false") << "\n";
  o << "\n[scheduler]\n";
  o << "policy = " << to_string(c.policy) << "\n";
  if (c.cluster_size == 0)
    o << "cluster_size = auto\n";
  else
    o << "cluster_size = " << c.cluster_size << "\n";
  o << "urllc_target_per = " << fmt_double(c.urllc_target_per) << "\n";
  o << "urllc_max_delay_s = " << fmt_double(c.urllc_max_delay_s) << "\n";
  o << "\n[assignment]\n";
  o << "mode = " << to_string(c.assign_mode) << "\n";
  o << "\n[run]\n";
  o << "slots = " << c.slots << "\n";
  o << "replications = " << c.replications << "\n";
  o << "master_seed = " << c.master_seed << "\n";
  if (c.warmup < 0)
    o << "warmup = auto\n";
  else
    o << "warmup = " << c.warmup << "\n";
  o << "parallelism = " << c.parallelism << "\n";
  if (c.sweep) {
    o << "\n[sweep]\n";
    o << "key = " << c.sweep->key << "\n";
    o << "values = ";
    for (std::size_t i = 0; i < c.sweep->values.size(); ++i) {
      if (i) o << ",";
      o << c.sweep->values[i];
    }
    o << "\n";
  }
  return o.str();
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  const std::string s = serialize_config(cfg);
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ClusterOptInput cluster_opt_input(const ExperimentConfig& cfg) {
  const double snr = std::pow(10.0, cfg.channel.reference_snr_db / 10.0);
  return ClusterOptInput::from_snr(cfg.subcarriers, cfg.blocklength, snr,
                                   cfg.payload_bits);
}

SimConfig resolve_sim_config(const ExperimentConfig& cfg) {
  SimConfig sc;
  sc.ue_count = cfg.ue_count;
  sc.subcarriers = cfg.subcarriers;
  sc.blocklength = cfg.blocklength;
  sc.payload_bits = cfg.payload_bits;
  sc.policy = cfg.policy;
  sc.assign_mode = cfg.assign_mode;
  sc.channel_kind = cfg.channel_model;
  sc.channel = cfg.channel;
  sc.slots = cfg.slots;
  sc.warmup = cfg.warmup;

  const int l_cap = std::min(cfg.ue_count, cfg.subcarriers);
  switch (cfg.policy) {
    case Policy::NoClustering:
      sc.cluster_size = 1;
      break;
    case Policy::UrllcBaseline: {
      const UrllcSizing sizing = urllc_cluster_size(
          cluster_opt_input(cfg), cfg.ue_count,
          cfg.blocklength * cfg.channel.symbol_duration_s, cfg.urllc_max_delay_s,
          cfg.urllc_target_per);
      sc.cluster_size = sizing.cluster_size;
      break;
    }
    default: {
      if (cfg.cluster_size == 0) {
        const ClusterOptResult opt = optimal_cluster_size(cluster_opt_input(cfg));
        sc.cluster_size = std::min(opt.l_int, l_cap);
      } else {
        sc.cluster_size = cfg.cluster_size;
      }
      break;
    }
  }
  if (sc.cluster_size > l_cap)
    throw ConfigError("scheduler.cluster_size exceeds min(ue_count, subcarriers)");
  sc.validate();
  return sc;
}

}  // namespace aoisched
