#include "aoisched/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "aoisched/rng.hpp"

namespace aoisched {

void ChannelConfig::validate() const {
  if (!(rayleigh_mean_duration_s > 0.0) || !(coherence_bandwidth_hz > 0.0) ||
      !(rayleigh_scale > 0.0) || !(subcarrier_bandwidth_hz > 0.0) ||
      !(symbol_duration_s > 0.0) || !(shadowing_sigma_db >= 0.0))
    throw std::invalid_argument("ChannelConfig: parameters must be positive");
  if (coherence_bandwidth_hz < subcarrier_bandwidth_hz)
    throw std::invalid_argument(
        "ChannelConfig: coherence bandwidth must be >= sub-carrier bandwidth");
}

FlatChannel::FlatChannel(double gamma_db, int subcarriers, int ue_count)
    : snr_(std::pow(10.0, gamma_db / 10.0)),
      subcarriers_(subcarriers),
      ue_count_(ue_count) {
  if (subcarriers < 1 || ue_count < 1)
    throw std::invalid_argument("FlatChannel: dimensions must be >= 1");
}

FlatChannel flat_awgn(double gamma_db, int subcarriers, int ue_count) {
  return FlatChannel(gamma_db, subcarriers, ue_count);
}

FadedChannel::FadedChannel(const ChannelConfig& cfg, int subcarriers, int ue_count,
                           int blocklength, Rng& rng)
    : cfg_(cfg), subcarriers_(subcarriers), ue_count_(ue_count) {
  cfg_.validate();
  if (subcarriers < 1 || ue_count < 1 || blocklength < 1)
    throw std::invalid_argument("FadedChannel: dimensions must be >= 1");
  ref_snr_ = std::pow(10.0, cfg_.reference_snr_db / 10.0);
  bins_ = bin_of(subcarriers_ - 1) + 1;
  bin_carriers_.assign(static_cast<std::size_t>(bins_), 0);
  for (int m = 0; m < subcarriers_; ++m) ++bin_carriers_[static_cast<std::size_t>(bin_of(m))];
  const double slot_s = blocklength * cfg_.symbol_duration_s;
  redraw_prob_ = std::min(1.0, slot_s / cfg_.rayleigh_mean_duration_s);

  shadow_.resize(static_cast<std::size_t>(ue_count_));
  for (int i = 0; i < ue_count_; ++i)
    shadow_[static_cast<std::size_t>(i)] =
        cfg_.shadowing_sigma_db > 0.0 ? rng.lognormal_db(cfg_.shadowing_sigma_db) : 1.0;

  fade_.resize(static_cast<std::size_t>(bins_) * ue_count_);
  for (double& f : fade_) f = fade_draw(rng);
}

int FadedChannel::bin_of(int m) const {
  return static_cast<int>(m * cfg_.subcarrier_bandwidth_hz / cfg_.coherence_bandwidth_hz);
}

double FadedChannel::fade_draw(Rng& rng) const {
  if (!cfg_.rayleigh_enabled) return cfg_.rayleigh_scale;
  return rng.exponential(cfg_.rayleigh_scale);
}

void FadedChannel::step(Rng& rng) {
  if (!cfg_.rayleigh_enabled) return;
  for (double& f : fade_)
    if (rng.bernoulli(redraw_prob_)) f = fade_draw(rng);
}

double FadedChannel::snr(int m, int i) const {
  return ref_snr_ * shadow_[static_cast<std::size_t>(i)] *
         fade_[static_cast<std::size_t>(bin_of(m)) * ue_count_ + i];
}

double FadedChannel::mean_snr(int i) const {
  return ref_snr_ * shadow_[static_cast<std::size_t>(i)] * cfg_.rayleigh_scale;
}

double FadedChannel::rssi_snr(int i) const {
  double fade_mean = 0.0;
  for (int b = 0; b < bins_; ++b)
    fade_mean += bin_carriers_[static_cast<std::size_t>(b)] *
                 fade_[static_cast<std::size_t>(b) * ue_count_ + i];
  fade_mean /= subcarriers_;
  return ref_snr_ * shadow_[static_cast<std::size_t>(i)] * fade_mean;
}

}  // namespace aoisched
