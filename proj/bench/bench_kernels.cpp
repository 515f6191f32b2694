#include "ncafem/estimator.hpp"
#include "ncafem/fem.hpp"
#include "ncafem/problems.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace ncafem;

struct Fixture {
  ProblemSpec spec = kellogg_problem();
  Mesh mesh;
  CrSolution uh;

  explicit Fixture(int depth) {
    mesh = spec.build_initial_mesh();
    for (int i = 0; i < depth; ++i) mesh = bisect_all(mesh);
    uh = solve(assemble(mesh, spec, Exec::serial));
  }
};

const Fixture &fixture(int depth) {
  static std::map<int, Fixture> cache;
  auto it = cache.find(depth);
  if (it == cache.end()) it = cache.emplace(depth, Fixture(depth)).first;
  return it->second;
}

Exec exec_of(const benchmark::State &state) { return state.range(1) ? Exec::parallel : Exec::serial; }

void BM_Assemble(benchmark::State &state) {
  const Fixture &f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assemble(f.mesh, f.spec, exec_of(state)));
  state.counters["elements"] = f.mesh.num_elements();
}

void BM_Estimate(benchmark::State &state) {
  const Fixture &f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(estimate(f.mesh, f.spec, f.uh, exec_of(state)));
  state.counters["elements"] = f.mesh.num_elements();
}

void BM_TrueError(benchmark::State &state) {
  const Fixture &f = fixture(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(true_error(f.mesh, f.spec, f.uh, kDefaultGradingLevels, exec_of(state)));
  state.counters["elements"] = f.mesh.num_elements();
}

// second argument: 0 serial reference, 1 OpenMP
BENCHMARK(BM_Assemble)->ArgsProduct({{8, 12}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Estimate)->ArgsProduct({{8, 12}, {0, 1}})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrueError)->ArgsProduct({{8, 12}, {0, 1}})->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
