#pragma once

// Per-slot SNR realizations: a frequency-flat AWGN table and the system-level
// environment (Rayleigh block fading over coherence-bandwidth bins with
// per-replication log-normal shadowing).

#include <memory>
#include <vector>

namespace aoisched {

class Rng;

struct ChannelConfig {
  double reference_snr_db = 5.0;         // gamma_bar
  double shadowing_sigma_db = 3.0;       // sigma_gamma; 0 disables shadowing
  double rayleigh_mean_duration_s = 5e-3;
  double coherence_bandwidth_hz = 900e3;
  double rayleigh_scale = 1.0;           // mean power of the exponential fade
  double subcarrier_bandwidth_hz = 15e3;
  double symbol_duration_s = 71.3e-6;
  bool rayleigh_enabled = true;          // false pins the fade at its mean

  void validate() const;
};

class ChannelModel {
 public:
  virtual ~ChannelModel() = default;
  virtual void step(Rng& rng) = 0;                // advance one slot
  virtual double snr(int m, int i) const = 0;     // current slot, linear
  virtual double mean_snr(int i) const = 0;       // long-term per-UE mean
  // Wideband received-signal level of the current slot: the per-UE SNR
  // averaged over all sub-carriers, with no per-carrier resolution.
  virtual double rssi_snr(int i) const = 0;
  virtual int subcarriers() const = 0;
  virtual int ue_count() const = 0;
};

// Every (m, i) entry equal to 10^(gamma_db/10), time-invariant.
class FlatChannel final : public ChannelModel {
 public:
  FlatChannel(double gamma_db, int subcarriers, int ue_count);
  void step(Rng&) override {}
  double snr(int, int) const override { return snr_; }
  double mean_snr(int) const override { return snr_; }
  double rssi_snr(int) const override { return snr_; }
  int subcarriers() const override { return subcarriers_; }
  int ue_count() const override { return ue_count_; }

 private:
  double snr_;
  int subcarriers_;
  int ue_count_;
};

FlatChannel flat_awgn(double gamma_db, int subcarriers, int ue_count);

// Block fading: contiguous carriers share a frequency bin of one coherence
// bandwidth; each (UE, bin) fade holds for a geometric number of slots with
// mean rayleigh_mean_duration / slot_duration and unit-mean exponential power
// (times rayleigh_scale). Shadowing is drawn once per instance.
class FadedChannel final : public ChannelModel {
 public:
  FadedChannel(const ChannelConfig& cfg, int subcarriers, int ue_count,
               int blocklength, Rng& rng);
  void step(Rng& rng) override;
  double snr(int m, int i) const override;
  double mean_snr(int i) const override;
  double rssi_snr(int i) const override;
  int subcarriers() const override { return subcarriers_; }
  int ue_count() const override { return ue_count_; }

  int bins() const { return bins_; }
  double redraw_probability() const { return redraw_prob_; }
  double shadow(int i) const { return shadow_[static_cast<std::size_t>(i)]; }
  int bin_of(int m) const;

 private:
  double fade_draw(Rng& rng) const;

  ChannelConfig cfg_;
  int subcarriers_;
  int ue_count_;
  int bins_;
  double ref_snr_;
  double redraw_prob_;
  std::vector<double> shadow_;      // per UE
  std::vector<double> fade_;        // bin-major [bin * I + i]
  std::vector<int> bin_carriers_;   // carriers per frequency bin
};

}  // namespace aoisched
