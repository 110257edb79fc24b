#include <benchmark/benchmark.h>

#include <Eigen/Core>

#include "polarcone/polar.hpp"
#include "polarcone/projection.hpp"
#include "polarcone/random.hpp"
#include "polarcone/spaces.hpp"

using namespace polarcone;

namespace {

Space lp_space(int n, double p) { return Space(SpaceSpec::lp(n, p)); }

void BM_lp_duality_map(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Space space = lp_space(n, 3.0);
  GaussianSampler rng(1);
  const PrimalVec x{rng.vector(n)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(space.duality_map(x));
  }
}
BENCHMARK(BM_lp_duality_map)->Arg(3)->Arg(16)->Arg(64);

void BM_lp_roundtrip(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Space space = lp_space(n, 4.0);
  GaussianSampler rng(2);
  const PrimalVec x{rng.vector(n)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(space.inverse_duality_map(space.duality_map(x)));
  }
}
BENCHMARK(BM_lp_roundtrip)->Arg(3)->Arg(16);

void BM_quadratic_inverse(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  Space space(SpaceSpec::quadratic(random_spd_matrix(n, 3)));
  GaussianSampler rng(4);
  const DualVec a{rng.vector(n)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(space.inverse_duality_map(a));
  }
}
BENCHMARK(BM_quadratic_inverse)->Arg(3)->Arg(16)->Arg(64);

void BM_project_halfspace(benchmark::State& state) {
  Space space = lp_space(3, 4.0);
  GaussianSampler rng(5);
  DualVec a{rng.vector(3)};
  a.coords /= space.dual_norm(a);
  const PrimalVec x{rng.vector(3)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_halfspace(space, a, x));
  }
}
BENCHMARK(BM_project_halfspace);

void BM_project_cone_l4(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  Space space = lp_space(3, 4.0);
  GaussianSampler rng(6);
  std::vector<PrimalVec> gens;
  for (int j = 0; j < m; ++j) gens.push_back(PrimalVec{rng.vector(3)});
  const auto cone = FiniteCone::make(gens);
  const PrimalVec x{rng.vector(3)};
  for (auto _ : state) {
    benchmark::DoNotOptimize(project_cone(space, cone, x));
  }
}
BENCHMARK(BM_project_cone_l4)->Arg(2)->Arg(4)->Arg(8);

void BM_certify_wedge(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  Space space = lp_space(3, 4.0);
  const auto arc = MeridianArc::make(space, DualVec{Eigen::Vector3d(0, 1, 1)},
                                     DualVec{Eigen::Vector3d(1, 0, 1)});
  for (auto _ : state) {
    benchmark::DoNotOptimize(certify_wedge_polar_convexity(space, arc, m));
  }
}
BENCHMARK(BM_certify_wedge)->Arg(17)->Arg(33)->Arg(65)->Unit(benchmark::kMillisecond);

void BM_subspace_criterion(benchmark::State& state) {
  Space space = lp_space(3, 3.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(subspace_criterion_check(space, 100, 1e-8, 7));
  }
}
BENCHMARK(BM_subspace_criterion)->Unit(benchmark::kMillisecond);

}  // namespace

int main(int argc, char** argv) {
  benchmark::Initialize(&argc, argv);
  if (benchmark::ReportUnrecognizedArguments(argc, argv)) return 1;
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
