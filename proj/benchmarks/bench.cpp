#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "dehnfill/developer.hpp"
#include "dehnfill/equations.hpp"
#include "dehnfill/solver.hpp"
#include "dehnfill/triangulation.hpp"

using namespace dehnfill;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

IdealTriangulation fig8() { return parse_triangulation(read_file(std::string(FIXTURE_DIR) + "/fig8.json")); }

void BM_ParseValidate(benchmark::State& state) {
  std::string text = read_file(std::string(FIXTURE_DIR) + "/fig8.json");
  for (auto _ : state) benchmark::DoNotOptimize(parse_triangulation(text));
}
BENCHMARK(BM_ParseValidate);

void BM_AssembleSystem(benchmark::State& state) {
  IdealTriangulation T = fig8();
  for (auto _ : state) benchmark::DoNotOptimize(assemble_system(T));
}
BENCHMARK(BM_AssembleSystem);

void BM_SolveComplete(benchmark::State& state) {
  GluingSystem sys = assemble_system(fig8());
  for (auto _ : state) benchmark::DoNotOptimize(solve_complete(sys));
}
BENCHMARK(BM_SolveComplete);

void BM_SolveFilled(benchmark::State& state) {
  GluingSystem sys = assemble_system(fig8());
  auto [res, lc] = solve_complete(sys);
  FillingTarget target = {GeneralizedCoefficient::filling(5, 1)};
  for (auto _ : state) benchmark::DoNotOptimize(newton_solve(res.shapes, sys, lc, target, {}));
}
BENCHMARK(BM_SolveFilled);

void BM_DevelopTorus(benchmark::State& state) {
  IdealTriangulation T = fig8();
  GluingSystem sys = assemble_system(T);
  auto [res, lc] = solve_complete(sys);
  for (auto _ : state) benchmark::DoNotOptimize(develop_torus(T, 0, res.shapes));
}
BENCHMARK(BM_DevelopTorus);

void BM_DevelopTetrahedra(benchmark::State& state) {
  IdealTriangulation T = fig8();
  GluingSystem sys = assemble_system(T);
  auto [res, lc] = solve_complete(sys);
  for (auto _ : state) benchmark::DoNotOptimize(develop_tetrahedra(T, res.shapes));
}
BENCHMARK(BM_DevelopTetrahedra);

void BM_Sweep(benchmark::State& state) {
  GluingSystem sys = assemble_system(fig8());
  auto [res, lc] = solve_complete(sys);
  SweepOptions o;
  o.pq_min = -static_cast<int>(state.range(0));
  o.pq_max = static_cast<int>(state.range(0));
  o.jobs = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(sweep(sys, lc, res, 0, o));
}
BENCHMARK(BM_Sweep)->Args({8, 1})->Args({8, 4})->Args({16, 4});

}  // namespace

BENCHMARK_MAIN();
