#include <benchmark/benchmark.h>

#include <vector>

#include "srw/dynamics.hpp"
#include "srw/hypermatrix.hpp"
#include "srw/learn.hpp"
#include "srw/random.hpp"
#include "srw/simulate.hpp"

namespace {

srw::TransitionHypermatrix random_hypermatrix(std::size_t order, std::size_t dim, std::uint64_t seed) {
  srw::Rng rng(seed);
  std::size_t cols = 1;
  for (std::size_t t = 1; t < order; ++t) cols *= dim;
  Eigen::MatrixXd r(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(cols));
  for (Eigen::Index c = 0; c < r.cols(); ++c) {
    const auto col = rng.simplex_point(dim);
    for (Eigen::Index i = 0; i < r.rows(); ++i) r(i, c) = col[static_cast<std::size_t>(i)];
  }
  return srw::TransitionHypermatrix::create(order, dim, std::move(r));
}

void BM_BuildMw(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto order = static_cast<std::size_t>(state.range(1));
  const auto h = random_hypermatrix(order, dim, 1);
  const auto w = srw::StochasticVector::uniform(dim);
  for (auto _ : state) benchmark::DoNotOptimize(srw::build_mw(h, w));
}
BENCHMARK(BM_BuildMw)->Args({4, 3})->Args({16, 3})->Args({64, 3})->Args({8, 4});

void BM_PerronVector(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto m = srw::build_mw(random_hypermatrix(3, dim, 2), srw::StochasticVector::uniform(dim));
  for (auto _ : state) benchmark::DoNotOptimize(srw::perron_vector(m));
}
BENCHMARK(BM_PerronVector)->Arg(4)->Arg(16)->Arg(64)->Arg(128);

// Cost per simulated transition.
void BM_SimulateStep(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto h = random_hypermatrix(3, dim, 3);
  constexpr std::size_t kSteps = 10'000;
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(srw::simulate(h, 0, kSteps, seed++, false));
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * kSteps));
}
BENCHMARK(BM_SimulateStep)->Arg(4)->Arg(16)->Arg(64);

// One projected-gradient iteration on 20 trajectories of 200 steps.
void BM_FitIteration(benchmark::State& state) {
  const auto dim = static_cast<std::size_t>(state.range(0));
  const auto h = random_hypermatrix(3, dim, 4);
  std::vector<srw::Trajectory> data;
  for (std::uint64_t s = 0; s < 20; ++s) data.push_back(srw::simulate(h, 0, 200, s, false).trajectory);
  srw::FitConfig config;
  config.max_iters = 1;
  for (auto _ : state) benchmark::DoNotOptimize(srw::fit_srw(data, dim, config));
}
BENCHMARK(BM_FitIteration)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
