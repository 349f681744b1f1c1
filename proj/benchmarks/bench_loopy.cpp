// Microbenchmarks for the hot paths: the RD right-hand side and Euler step,
// the closure projection, and the shape metrics.

#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "loopy/analysis.hpp"
#include "loopy/geometry.hpp"
#include "loopy/rd.hpp"
#include "loopy/types.hpp"

namespace {

loopy::RingSpec make_spec(int n) {
  loopy::RingSpec spec;
  spec.n_cells = n;
  return spec;
}

loopy::MorphogenState make_state(const loopy::RingSpec& spec) {
  return loopy::init_state(spec, loopy::regular_polygon_angles(spec.n_cells),
                           0.001, 42);
}

loopy::JointAngles perturbed_angles(int n, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  loopy::JointAngles a;
  a.theta.assign(static_cast<std::size_t>(n), 2.0 * M_PI / n);
  for (double& t : a.theta) t += noise(rng);
  return a;
}

void bm_ring_laplacian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto spec = make_spec(n);
  const auto field = make_state(spec).q_act;
  for (auto _ : state) {
    auto lap = loopy::ring_laplacian(field, spec.cell_length);
    benchmark::DoNotOptimize(lap.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void bm_derivatives_into(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto spec = make_spec(n);
  loopy::ReactionParams params;
  const auto field = make_state(spec);
  loopy::Derivatives out;
  for (auto _ : state) {
    loopy::derivatives_into(field, params, spec, out);
    benchmark::DoNotOptimize(out.q_act.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void bm_euler_step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto spec = make_spec(n);
  loopy::ReactionParams params;
  auto field = make_state(spec);
  for (auto _ : state) {
    field = loopy::step(field, params, spec);
    benchmark::DoNotOptimize(field.q_act.data());
  }
  state.SetItemsProcessed(state.iterations() * n);
}

void bm_project_to_closure(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto angles = perturbed_angles(n, 0.05, 7);
  for (auto _ : state) {
    auto projected = loopy::project_to_closure(angles, 1.0);
    benchmark::DoNotOptimize(projected.theta.data());
  }
}

void bm_self_intersection(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto geometry =
      loopy::reconstruct_polygon(perturbed_angles(n, 0.3, 11), 1.0);
  for (auto _ : state) {
    auto points = loopy::self_intersection_points(geometry);
    benchmark::DoNotOptimize(points.data());
  }
}

void bm_turning_distance(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto a = perturbed_angles(n, 0.05, 3);
  const auto b = perturbed_angles(n, 0.05, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(loopy::turning_distance(a, b));
  }
}

void bm_count_lobes(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::vector<double> q_act(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m)
    q_act[static_cast<std::size_t>(m)] = std::sin(2.0 * M_PI * 5.0 * m / n);
  for (auto _ : state) {
    benchmark::DoNotOptimize(loopy::count_lobes(q_act));
  }
}

BENCHMARK(bm_ring_laplacian)->Arg(36)->Arg(144)->Arg(1024);
BENCHMARK(bm_derivatives_into)->Arg(36)->Arg(144)->Arg(1024);
BENCHMARK(bm_euler_step)->Arg(36)->Arg(144)->Arg(1024);
BENCHMARK(bm_project_to_closure)->Arg(36)->Arg(144);
BENCHMARK(bm_self_intersection)->Arg(36)->Arg(144);
BENCHMARK(bm_turning_distance)->Arg(36)->Arg(144);
BENCHMARK(bm_count_lobes)->Arg(36)->Arg(144)->Arg(1024);

}  // namespace

BENCHMARK_MAIN();
