#include <benchmark/benchmark.h>

#include <random>

#include "ghsc/channel.hpp"
#include "ghsc/code.hpp"
#include "ghsc/exact.hpp"
#include "ghsc/rbim.hpp"
#include "ghsc/stability.hpp"

namespace {

using namespace ghsc;

PauliOperator random_pauli(std::size_t n, std::mt19937_64& rng) {
  std::string s = "+1 ";
  for (std::size_t q = 0; q < n; ++q) s += "IXYZ"[rng() & 3];
  return PauliOperator::from_string(s);
}

void BM_PauliMultiply(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 rng(1);
  const auto a = random_pauli(n, rng), b = random_pauli(n, rng);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(BM_PauliMultiply)->Arg(13)->Arg(64)->Arg(256);

void BM_HamiltonianMatvec(benchmark::State& state) {
  const auto g = build_geometry(static_cast<std::size_t>(state.range(0)), 2);
  const SparsePauliMatrix h(build_hamiltonian(Model::kTc, g, 0.5).terms);
  Amplitudes x = Amplitudes::Random(static_cast<Eigen::Index>(h.dimension()));
  Amplitudes y(x.size());
  for (auto _ : state) {
    h.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(h.dimension()));
}
BENCHMARK(BM_HamiltonianMatvec)->Arg(2)->Arg(3)->Unit(benchmark::kMicrosecond);

void BM_GroundState(benchmark::State& state) {
  const auto g = build_geometry(3, 2);
  const auto h = build_hamiltonian(Model::kTc, g, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(ground_state_in_sector(h, Sector{}).energy);
}
BENCHMARK(BM_GroundState)->Unit(benchmark::kMillisecond);

void BM_DecohereGram(benchmark::State& state) {
  const auto g = build_geometry(3, 2);
  const auto psi = ground_state_in_sector(build_hamiltonian(Model::kTc, g, 0.5), Sector{}).state;
  for (auto _ : state) benchmark::DoNotOptimize(decohere(psi, g, 0.15).eigenvalues().sum());
}
BENCHMARK(BM_DecohereGram)->Unit(benchmark::kMillisecond);

void BM_ExactF(benchmark::State& state) {
  const auto g = build_geometry(3, 2);
  const auto psi = ground_state_in_sector(build_hamiltonian(Model::kTc, g, 0.5), Sector{}).state;
  const auto d = decohere(psi, g, 0.15);
  const auto spec = default_coupling(g);
  for (auto _ : state) benchmark::DoNotOptimize(exact_F(d, spec.gauge_op, 0.05));
}
BENCHMARK(BM_ExactF)->Unit(benchmark::kMillisecond);

void BM_Metropolis(benchmark::State& state) {
  McOptions o;
  o.thermalization = 0;
  o.sweeps = 100;
  o.bins = 2;
  const McPoint pt{static_cast<std::size_t>(state.range(0)), 0.1, nishimori_beta(0.1)};
  for (auto _ : state) benchmark::DoNotOptimize(mc_estimate(pt, o).energy);
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(pt.l * pt.l * o.sweeps));
}
BENCHMARK(BM_Metropolis)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_TransferMatrixPartition(benchmark::State& state) {
  const auto g = build_geometry(4, 3);
  std::mt19937_64 rng(3);
  const auto inst = rbim_instance(g, rng() & ((1ULL << g.num_links()) - 1), 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(exact_partition(inst, PartitionMethod::kTransferMatrix));
}
BENCHMARK(BM_TransferMatrixPartition);

}  // namespace

BENCHMARK_MAIN();
