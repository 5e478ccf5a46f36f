#include "qdyn/closed.hpp"
#include "qdyn/dephasing.hpp"
#include "qdyn/linalg.hpp"
#include "qdyn/markovian.hpp"
#include "qdyn/models.hpp"

#include <benchmark/benchmark.h>

#include <random>

namespace {

qdyn::ComplexMatrix random_hermitian(Eigen::Index dim, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> n;
  qdyn::ComplexMatrix a(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < dim; ++j) a(i, j) = qdyn::Complex{n(rng), n(rng)};
  return 0.5 * (a + a.adjoint());
}

qdyn::IsingParams ising(int spins) {
  qdyn::IsingParams p;
  p.spins = spins;
  p.alpha = 1.5;
  p.field = 1.0 / 0.42;
  return p;
}

void BM_Expm(benchmark::State& state) {
  const auto h = random_hermitian(state.range(0), 7);
  for (auto _ : state) benchmark::DoNotOptimize(qdyn::expm(h, qdyn::Complex{0.0, -0.05}));
}
BENCHMARK(BM_Expm)->RangeMultiplier(2)->Range(4, 256)->Unit(benchmark::kMicrosecond);

void BM_IsingQuench(benchmark::State& state) {
  const int spins = static_cast<int>(state.range(0));
  const auto h = qdyn::ising_hamiltonian(ising(spins));
  const auto psi0 = qdyn::ising_ground_pair(spins, 1.5).first;
  const qdyn::TimeGrid grid(0.0, 2.0, 2000);
  for (auto _ : state) {
    double last = 0.0;
    qdyn::propagate(h.total, psi0, grid, [&](std::size_t, double, const qdyn::ComplexVector& psi) {
      last = psi.norm();
    });
    benchmark::DoNotOptimize(last);
  }
}
BENCHMARK(BM_IsingQuench)->DenseRange(3, 9, 2)->Unit(benchmark::kMillisecond);

void BM_Decompose(benchmark::State& state) {
  const auto d = state.range(0);
  const auto h = random_hermitian(d, 11);
  std::vector<qdyn::LindbladChannel> channels;
  for (Eigen::Index i = 0; i + 1 < d; ++i) {
    qdyn::ComplexMatrix op = qdyn::ComplexMatrix::Zero(d, d);
    op(i, i + 1) = 1.0;
    channels.push_back({op, 0.1});
  }
  const auto l = qdyn::build_liouvillian(h, channels);
  for (auto _ : state) benchmark::DoNotOptimize(qdyn::decompose(l));
}
BENCHMARK(BM_Decompose)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

void BM_DephasingRate(benchmark::State& state) {
  qdyn::BathParams bath;
  bath.sdf = qdyn::SuperOhmicExp{0.5, 2.5, 0.1};
  bath.temperature = 2e-3;
  const double t = static_cast<double>(state.range(0));
  for (auto _ : state) {
    const qdyn::DephasingRate rate(bath);
    benchmark::DoNotOptimize(rate(t));
  }
}
BENCHMARK(BM_DephasingRate)->Arg(1)->Arg(10)->Arg(60)->Unit(benchmark::kMillisecond);

void BM_RateTable(benchmark::State& state) {
  qdyn::BathParams bath;
  bath.sdf = qdyn::SuperOhmicExp{0.5, 2.5, 0.1};
  bath.temperature = 2e-3;
  const qdyn::DephasingRate rate(bath);
  const qdyn::TimeGrid grid(0.0, 60.0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(qdyn::RateTable::build(rate, grid));
}
BENCHMARK(BM_RateTable)->Arg(600)->Arg(6000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
