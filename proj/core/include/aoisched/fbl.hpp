#pragma once

// Finite-blocklength link model: Gaussian Q-function, normal-approximation
// packet error rate over a set of assigned sub-carriers, and its expectation
// over fading gain distributions. This is the numeric kernel the schedulers,
// the cluster-size optimizer and the simulator all call into.

#include <cstdint>
#include <span>
#include <vector>

namespace aoisched {

// Capacity/dispersion pair of one sub-carrier link at a given linear SNR.
struct LinkQuality {
  double snr;         // linear power ratio, > 0
  double capacity;    // log2(1 + snr), bits per symbol per Hz-normalized carrier
  double dispersion;  // 1 - 1/(1+snr)^2, in (0,1)

  static LinkQuality from_snr(double snr);
};

// Block parameters of one transmission attempt.
struct FblParams {
  int blocklength;   // n: symbols spent on each assigned sub-carrier per slot
  int payload_bits;  // tau

  double scaled_payload() const;  // tau * ln2
  void validate() const;
};

double ln2_scaled(double bits_or_capacity);  // x * ln2

// Gaussian tail probability Q(x) = P(N(0,1) > x), clamped into [0, 1].
// Throws std::domain_error on non-finite input.
double q_function(double x);

// Error probability of one attempt carrying `tau` bits over the given links,
// each used for `n` symbols:
//   Q( (sum_m C_m * n - tau) * ln2 / sqrt(sum_m V_m * n) ).
// An empty link set throws std::invalid_argument ("no sub-carrier assigned");
// the simulator maps that situation to eps = 1 before ever calling this.
double packet_error_rate(std::span<const LinkQuality> links, int n, int tau);
double packet_error_rate(std::span<const LinkQuality> links, const FblParams& params);

// Same attempt with b identical links at one common SNR.
double packet_error_rate_uniform(double snr, double b, int n, int tau);

class Rng;

// Channel gain law used by the blind-assignment analysis. The gain is the
// linear SNR of one sub-carrier.
struct GainDistribution {
  enum class Kind { Degenerate, Gamma, Exponential };
  Kind kind = Kind::Degenerate;
  double a = 1.0;  // Degenerate: the point mass; Gamma: shape; Exponential: mean
  double b = 1.0;  // Gamma: scale

  static GainDistribution degenerate(double z);
  static GainDistribution gamma_gains(double shape, double scale);
  static GainDistribution exponential(double mean);

  double mean() const;
  double sample(Rng& rng) const;
};

// Monte Carlo estimate of the expected PER of a UE holding b i.i.d. faded
// sub-carriers. Deterministic given the seed.
double expected_per_over_fading(const GainDistribution& dist, int b, int n, int tau,
                                std::uint64_t samples, std::uint64_t seed);

}  // namespace aoisched
