#include <benchmark/benchmark.h>

#include "prw/exact_ot.hpp"
#include "prw/measures.hpp"
#include "prw/projector_distances.hpp"
#include "prw/stiefel.hpp"

using namespace prw;

static void BM_ExactOt(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd x = sample_hypercube(2, 5.0, n, Seed{1});
  const Eigen::MatrixXd y = sample_hypercube(2, 5.0, n, Seed{2});
  const Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / n);
  const CostMatrix cost = cost_matrix(x, y, nullptr, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_exact_ot(cost, w, w).value);
  }
}
BENCHMARK(BM_ExactOt)->Arg(64)->Arg(256)->Arg(1000)->Unit(benchmark::kMillisecond);

static void BM_Wasserstein1d(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(Seed{3});
  Eigen::VectorXd xs(n), ys(n);
  for (int i = 0; i < n; ++i) {
    xs(i) = rng.normal();
    ys(i) = rng.normal();
  }
  const Eigen::VectorXd w = Eigen::VectorXd::Constant(n, 1.0 / n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(wasserstein_1d_pth(xs, w, ys, w, 2.0));
  }
}
BENCHMARK(BM_Wasserstein1d)->Arg(1000)->Arg(10000)->Unit(benchmark::kMicrosecond);

static void BM_Rsgan(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const DiscreteMeasure mu = make_empirical(sample_hypercube(20, 1.0, n, Seed{4}));
  const DiscreteMeasure nu = make_empirical(sample_hypercube(20, 1.0, n, Seed{5}));
  RsganConfig config;
  config.k = 2;
  config.max_iter = 5;
  config.seed = Seed{6};
  for (auto _ : state) {
    benchmark::DoNotOptimize(prw2_rsgan(mu, nu, config).value);
  }
}
BENCHMARK(BM_Rsgan)->Arg(100)->Arg(250)->Unit(benchmark::kMillisecond);

static void BM_StiefelSample(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_uniform_stiefel(50, 5, Seed{seed++}).matrix());
  }
}
BENCHMARK(BM_StiefelSample);

static void BM_PositiveStable(benchmark::State& state) {
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sample_positive_stable(0.9, 1000, Seed{seed++}));
  }
}
BENCHMARK(BM_PositiveStable)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
