// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "ivfs/distance.hpp"
#include "ivfs/engine.hpp"
#include "ivfs/kernels.hpp"
#include "ivfs/persistence.hpp"
#include "ivfs/synthetic.hpp"

namespace {

std::vector<double> block(std::size_t rows, std::size_t cols) {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> normal;
  std::vector<double> v(rows * cols);
  for (auto& e : v) e = normal(rng);
  return v;
}

void pairwise_serial(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const auto cols = static_cast<std::size_t>(state.range(1));
  const auto x = block(rows, cols);
  std::vector<double> out(rows * rows);
  for (auto _ : state) {
    ivfs::kernels::serial::pairwise_squared(x, rows, cols, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows * (rows - 1) / 2 * cols));
}

void pairwise_omp(benchmark::State& state) {
  const auto rows = static_cast<std::size_t>(state.range(0));
  const auto cols = static_cast<std::size_t>(state.range(1));
  const auto x = block(rows, cols);
  std::vector<double> out(rows * rows);
  for (auto _ : state) {
    ivfs::kernels::omp::pairwise_squared(x, rows, cols, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(rows * (rows - 1) / 2 * cols));
}

void ivfs_run(benchmark::State& state, ivfs::Parallelism par) {
  const auto fx = ivfs::synthetic::informative_noise({}, 0);
  auto config = ivfs::IvfsConfig::defaults(fx.matrix.rows(), fx.matrix.cols());
  config.n_tilde = 45;
  ivfs::RunOptions options;
  options.parallelism = par;
  for (auto _ : state) {
    auto r = ivfs::run_ivfs(fx.matrix, config, nullptr, options);
    benchmark::DoNotOptimize(r.ranking.order.data());
  }
}

void ivfs_serial(benchmark::State& state) { ivfs_run(state, ivfs::kSerial); }
void ivfs_parallel(benchmark::State& state) { ivfs_run(state, {}); }

void rips_h1(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto d = ivfs::distance_matrix(ivfs::synthetic::uniform_cloud(n, 3, 1));
  const auto filt = ivfs::build_filtration(d, 0.5);
  for (auto _ : state) {
    auto diag = ivfs::persistence_h1(filt);
    benchmark::DoNotOptimize(diag.bars.data());
  }
}

}  // namespace

BENCHMARK(pairwise_serial)->Args({100, 64})->Args({150, 1000})->Args({100, 10304})->Unit(benchmark::kMicrosecond);
BENCHMARK(pairwise_omp)->Args({100, 64})->Args({150, 1000})->Args({100, 10304})->Unit(benchmark::kMicrosecond);
BENCHMARK(ivfs_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(ivfs_parallel)->Unit(benchmark::kMillisecond);
BENCHMARK(rips_h1)->Arg(60)->Arg(150)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
