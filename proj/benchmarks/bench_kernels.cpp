#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "aoisched/assignment.hpp"
#include "aoisched/cluster.hpp"
#include "aoisched/fbl.hpp"
#include "aoisched/lambert.hpp"
#include "aoisched/rng.hpp"
#include "aoisched/sim.hpp"

using namespace aoisched;

static void BM_QFunction(benchmark::State& state) {
  double x = -8.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(q_function(x));
    x += 0.001;
    if (x > 8.0) x = -8.0;
  }
}
BENCHMARK(BM_QFunction);

static void BM_PacketErrorRate(benchmark::State& state) {
  const int b = static_cast<int>(state.range(0));
  std::vector<LinkQuality> links;
  Rng rng(1);
  for (int i = 0; i < b; ++i)
    links.push_back(LinkQuality::from_snr(0.5 + 5.0 * rng.uniform01()));
  for (auto _ : state) benchmark::DoNotOptimize(packet_error_rate(links, 1, 32));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PacketErrorRate)->RangeMultiplier(4)->Range(4, 256)->Complexity();

static void BM_LambertWMinus1(benchmark::State& state) {
  double x = -0.3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(lambert_w_minus1(x));
    x *= 0.999;
    if (x > -1e-10) x = -0.3;
  }
}
BENCHMARK(BM_LambertWMinus1);

static void BM_OptimalClusterSize(benchmark::State& state) {
  const ClusterOptInput in = ClusterOptInput::from_snr(1000, 1, 3.1623, 64);
  for (auto _ : state) benchmark::DoNotOptimize(optimal_cluster_size(in));
}
BENCHMARK(BM_OptimalClusterSize);

static void BM_UniformBlindAssign(benchmark::State& state) {
  Rng rng(7);
  const int m = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(uniform_blind_assign(m, 5, rng));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_UniformBlindAssign)->RangeMultiplier(4)->Range(16, 1024)->Complexity();

static void BM_SimulationSlot(benchmark::State& state) {
  SimConfig cfg;
  cfg.ue_count = 100;
  cfg.subcarriers = 100;
  cfg.blocklength = 1;
  cfg.payload_bits = 32;
  cfg.policy = Policy::ClusteredRR;
  cfg.cluster_size = 5;
  cfg.assign_mode = AssignMode::UniformBlind;
  cfg.channel_kind = ChannelKind::Faded;
  cfg.slots = 1;
  Simulation sim(cfg, 11);
  for (auto _ : state) sim.step();
}
BENCHMARK(BM_SimulationSlot);

static void BM_SimulationSlotRecursive(benchmark::State& state) {
  SimConfig cfg;
  cfg.ue_count = 100;
  cfg.subcarriers = 100;
  cfg.blocklength = 1;
  cfg.payload_bits = 32;
  cfg.policy = Policy::AoiIndex;
  cfg.cluster_size = 5;
  cfg.assign_mode = AssignMode::RecursiveCsi;
  cfg.channel_kind = ChannelKind::Faded;
  cfg.slots = 1;
  Simulation sim(cfg, 11);
  for (auto _ : state) sim.step();
}
BENCHMARK(BM_SimulationSlotRecursive);
