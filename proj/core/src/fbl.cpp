#include "aoisched/fbl.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "aoisched/rng.hpp"

namespace aoisched {

LinkQuality LinkQuality::from_snr(double snr) {
  if (!(snr > 0.0) || !std::isfinite(snr))
    throw std::domain_error("LinkQuality: snr must be finite and > 0");
  const double one_plus = 1.0 + snr;
  return LinkQuality{snr, std::log2(one_plus), 1.0 - 1.0 / (one_plus * one_plus)};
}

double FblParams::scaled_payload() const { return payload_bits * std::numbers::ln2; }

void FblParams::validate() const {
  if (blocklength < 1 || payload_bits < 1)
    throw std::invalid_argument("FblParams: blocklength and payload_bits must be >= 1");
}

double ln2_scaled(double bits_or_capacity) { return bits_or_capacity * std::numbers::ln2; }

double q_function(double x) {
  if (!std::isfinite(x)) throw std::domain_error("q_function: non-finite argument");
  const double q = 0.5 * std::erfc(x / std::numbers::sqrt2);
  if (q < 0.0) return 0.0;
  if (q > 1.0) return 1.0;
  return q;
}

double packet_error_rate(std::span<const LinkQuality> links, int n, int tau) {
  if (links.empty())
    throw std::invalid_argument("packet_error_rate: no sub-carrier assigned");
  if (n < 1 || tau < 1)
    throw std::invalid_argument("packet_error_rate: n and tau must be >= 1");
  double cap_bits = 0.0;
  double disp = 0.0;
  for (const LinkQuality& l : links) {
    cap_bits += l.capacity;
    disp += l.dispersion;
  }
  cap_bits *= n;
  disp *= n;
  if (disp <= 0.0)
    throw std::domain_error("packet_error_rate: zero total dispersion");
  const double arg = (cap_bits - tau) * std::numbers::ln2 / std::sqrt(disp);
  return q_function(arg);
}

double packet_error_rate(std::span<const LinkQuality> links, const FblParams& params) {
  params.validate();
  return packet_error_rate(links, params.blocklength, params.payload_bits);
}

double packet_error_rate_uniform(double snr, double b, int n, int tau) {
  if (!(b > 0.0)) throw std::invalid_argument("packet_error_rate_uniform: b must be > 0");
  const LinkQuality l = LinkQuality::from_snr(snr);
  const double cap_bits = b * l.capacity * n;
  const double disp = b * l.dispersion * n;
  const double arg = (cap_bits - tau) * std::numbers::ln2 / std::sqrt(disp);
  return q_function(arg);
}

GainDistribution GainDistribution::degenerate(double z) {
  if (!(z > 0.0)) throw std::invalid_argument("GainDistribution: gain must be > 0");
  return GainDistribution{Kind::Degenerate, z, 0.0};
}

GainDistribution GainDistribution::gamma_gains(double shape, double scale) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw std::invalid_argument("GainDistribution: gamma parameters must be > 0");
  return GainDistribution{Kind::Gamma, shape, scale};
}

GainDistribution GainDistribution::exponential(double mean) {
  if (!(mean > 0.0)) throw std::invalid_argument("GainDistribution: mean must be > 0");
  return GainDistribution{Kind::Exponential, mean, 0.0};
}

double GainDistribution::mean() const {
  switch (kind) {
    case Kind::Degenerate: return a;
    case Kind::Gamma: return a * b;
    case Kind::Exponential: return a;
  }
  throw std::invalid_argument("GainDistribution: unsupported descriptor");
}

double GainDistribution::sample(Rng& rng) const {
  switch (kind) {
    case Kind::Degenerate: return a;
    case Kind::Gamma: return rng.gamma(a, b);
    case Kind::Exponential: return rng.exponential(a);
  }
  throw std::invalid_argument("GainDistribution: unsupported descriptor");
}

double expected_per_over_fading(const GainDistribution& dist, int b, int n, int tau,
                                std::uint64_t samples, std::uint64_t seed) {
  if (b < 1) throw std::invalid_argument("expected_per_over_fading: b must be >= 1");
  if (samples < 1) throw std::invalid_argument("expected_per_over_fading: samples must be >= 1");
  Rng rng(seed);
  std::vector<LinkQuality> links(static_cast<std::size_t>(b));
  double acc = 0.0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    for (int m = 0; m < b; ++m) links[static_cast<std::size_t>(m)] = LinkQuality::from_snr(dist.sample(rng));
    acc += packet_error_rate(links, n, tau);
  }
  return acc / static_cast<double>(samples);
}

}  // namespace aoisched
