#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "aoisched/fbl.hpp"
#include "aoisched/rng.hpp"
#include "support/oracles.hpp"

using namespace aoisched;

TEST_CASE("q_function at zero, symmetry point") {
  CHECK(q_function(0.0) == 0.5);
}

TEST_CASE("q_function deep tail neither panics nor goes negative") {
  const double q = q_function(40.0);
  CHECK(q >= 0.0);
  CHECK(q < 1e-300);
}

TEST_CASE("q_function matches the 90th percentile") {
  CHECK(q_function(1.2815515655) == doctest::Approx(0.1).epsilon(1e-5));
}

TEST_CASE("q_function against quadrature oracle on [-8, 8]") {
  for (double x = -8.0; x <= 8.0; x += 0.25)
    CHECK(std::abs(q_function(x) - oracles::q_by_quadrature(x)) < 1e-9);
}

TEST_CASE("q_function is monotone decreasing and clamped") {
  double prev = q_function(-30.0);
  CHECK(prev <= 1.0);
  for (double x = -29.5; x <= 30.0; x += 0.5) {
    const double q = q_function(x);
    CHECK(q <= prev);
    prev = q;
  }
}

TEST_CASE("q_function rejects non-finite input") {
  CHECK_THROWS_AS(q_function(std::numeric_limits<double>::quiet_NaN()), std::domain_error);
  CHECK_THROWS_AS(q_function(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("LinkQuality invariants over random SNRs") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const double snr = std::exp(rng.uniform01() * 12.0 - 6.0);
    const LinkQuality l = LinkQuality::from_snr(snr);
    CHECK(l.capacity == doctest::Approx(std::log2(1.0 + snr)).epsilon(1e-12));
    CHECK(l.dispersion > 0.0);
    CHECK(l.dispersion < 1.0);
    CHECK(l.dispersion ==
          doctest::Approx(1.0 - 1.0 / ((1.0 + snr) * (1.0 + snr))).epsilon(1e-12));
  }
  CHECK_THROWS_AS(LinkQuality::from_snr(0.0), std::domain_error);
  CHECK_THROWS_AS(LinkQuality::from_snr(-1.0), std::domain_error);
}

TEST_CASE("packet_error_rate at the capacity boundary is exactly one half") {
  // snr = 3 gives capacity log2(4) = 2 bits exactly; tau = 2, n = 1.
  const LinkQuality l = LinkQuality::from_snr(3.0);
  const std::vector<LinkQuality> links{l};
  CHECK(packet_error_rate(links, 1, 2) == 0.5);
}

TEST_CASE("packet_error_rate, two identical boundary links vs scalar route") {
  // Each link carries exactly tau bits, so the pair gives headroom tau.
  const LinkQuality l = LinkQuality::from_snr(3.0);
  const std::vector<LinkQuality> links{l, l};
  const int n = 1, tau = 2;
  const double expected_arg =
      tau * std::numbers::ln2 / std::sqrt(2.0 * l.dispersion * n);
  const double expected = 0.5 * std::erfc(expected_arg / std::numbers::sqrt2);
  CHECK(packet_error_rate(links, n, tau) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("doubling identical carriers strictly decreases eps below one half") {
  const LinkQuality l = LinkQuality::from_snr(1.5);
  const int n = 2, tau = 6;
  std::vector<LinkQuality> links;
  double prev = 1.0;
  bool below_half = false;
  for (int b = 1; b <= 64; ++b) {
    links.push_back(l);
    const double eps = packet_error_rate(links, n, tau);
    if (below_half) CHECK(eps < prev);
    if (eps < 0.5) below_half = true;
    prev = eps;
  }
  CHECK(below_half);
}

TEST_CASE("packet_error_rate error paths") {
  CHECK_THROWS_AS(packet_error_rate({}, 1, 8), std::invalid_argument);
  const std::vector<LinkQuality> links{LinkQuality::from_snr(1.0)};
  CHECK_THROWS_AS(packet_error_rate(links, 0, 8), std::invalid_argument);
  CHECK_THROWS_AS(packet_error_rate(links, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(packet_error_rate(links, FblParams{1, 0}), std::invalid_argument);
}

TEST_CASE("FblParams carries the block pair and its ln2 scaling") {
  const FblParams p{4, 16};
  CHECK(p.scaled_payload() == doctest::Approx(16.0 * std::numbers::ln2).epsilon(1e-15));
  CHECK(ln2_scaled(2.0574) == doctest::Approx(2.0574 * std::numbers::ln2).epsilon(1e-15));
  const std::vector<LinkQuality> links(3, LinkQuality::from_snr(2.2));
  CHECK(packet_error_rate(links, p) == packet_error_rate(links, 4, 16));
}

TEST_CASE("eps limits: vanishing and saturating capacity") {
  // Capacity far above the payload drives eps to zero ...
  CHECK(packet_error_rate_uniform(1e6, 10, 10, 8) < 1e-12);
  // ... and far below drives it to one.
  CHECK(packet_error_rate_uniform(1e-9, 1, 1, 64) > 0.999);
}

TEST_CASE("eps is non-increasing in snr and carrier count on the positive margin") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_below(8));
    const int tau = 4 + static_cast<int>(rng.uniform_below(60));
    const double snr = 0.5 + 4.0 * rng.uniform01();
    // Find a carrier count with positive margin.
    double b = 1.0;
    while (packet_error_rate_uniform(snr, b, n, tau) >= 0.5 && b < 4096) b *= 2;
    if (packet_error_rate_uniform(snr, b, n, tau) >= 0.5) continue;
    CHECK(packet_error_rate_uniform(snr, b + 1, n, tau) <=
          packet_error_rate_uniform(snr, b, n, tau) + 1e-15);
    CHECK(packet_error_rate_uniform(snr * 1.05, b, n, tau) <=
          packet_error_rate_uniform(snr, b, n, tau) + 1e-15);
  }
}

TEST_CASE("eps is convex in the relaxed carrier count on the feasible region") {
  // Central finite differences at random points with positive margin.
  Rng rng(23);
  int checked = 0;
  while (checked < 20) {
    const int n = 1 + static_cast<int>(rng.uniform_below(6));
    const int tau = 8 + static_cast<int>(rng.uniform_below(100));
    const double snr = 0.3 + 5.0 * rng.uniform01();
    const double b = 1.0 + 30.0 * rng.uniform01();
    const auto eps_of_b = [&](double bb) {
      return packet_error_rate_uniform(snr, bb, n, tau);
    };
    if (eps_of_b(b - 0.1) >= 0.5) continue;  // keep rate below capacity
    const double sd = oracles::second_difference(eps_of_b, b, 0.05);
    CHECK(sd >= -1e-7);
    ++checked;
  }
}

TEST_CASE("expected_per_over_fading collapses for a point mass") {
  const GainDistribution d = GainDistribution::degenerate(2.5);
  const std::vector<LinkQuality> links(3, LinkQuality::from_snr(2.5));
  const double direct = packet_error_rate(links, 2, 12);
  CHECK(expected_per_over_fading(d, 3, 2, 12, 1, 99) == direct);
  CHECK(expected_per_over_fading(d, 3, 2, 12, 1000, 99) ==
        doctest::Approx(direct).epsilon(1e-13));
}

TEST_CASE("expected_per_over_fading is deterministic under the seed") {
  const GainDistribution d = GainDistribution::gamma_gains(2.0, 1.6);
  const double a = expected_per_over_fading(d, 2, 4, 16, 20000, 1234);
  const double b = expected_per_over_fading(d, 2, 4, 16, 20000, 1234);
  CHECK(a == b);
  CHECK(a != expected_per_over_fading(d, 2, 4, 16, 20000, 1235));
}

TEST_CASE("expected_per_over_fading single carrier against gamma quadrature") {
  const double shape = 2.0, scale = 1.6;
  const int n = 4, tau = 16;
  const GainDistribution d = GainDistribution::gamma_gains(shape, scale);
  const double mc = expected_per_over_fading(d, 1, n, tau, 400000, 5);
  const auto integrand = [&](double z) {
    return packet_error_rate_uniform(z, 1.0, n, tau);
  };
  const double quad = oracles::gamma_expectation(integrand, shape, scale, 120.0);
  CHECK(mc == doctest::Approx(quad).epsilon(5e-3));
}

TEST_CASE("expected_per_over_fading: more carriers help at fixed per-carrier law") {
  const GainDistribution d = GainDistribution::gamma_gains(2.0, 1.6);
  const int n = 4, tau = 16;
  const double e2 = expected_per_over_fading(d, 2, n, tau, 200000, 77);
  const double e4 = expected_per_over_fading(d, 4, n, tau, 200000, 77);
  CHECK(e4 < e2);
}

TEST_CASE("gain distribution descriptor validation") {
  CHECK_THROWS_AS(GainDistribution::degenerate(0.0), std::invalid_argument);
  CHECK_THROWS_AS(GainDistribution::gamma_gains(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(GainDistribution::exponential(0.0), std::invalid_argument);
  const GainDistribution d = GainDistribution::gamma_gains(2.0, 1.5);
  CHECK(d.mean() == doctest::Approx(3.0));
  CHECK_THROWS_AS(
      expected_per_over_fading(GainDistribution::degenerate(1.0), 0, 1, 8, 10, 1),
      std::invalid_argument);
}
