#include <benchmark/benchmark.h>

#include "speclab/problems.hpp"

using namespace speclab;

namespace {

void BM_DirichletSolve(benchmark::State& state) {
  const Domain d = make_disk(1.0);
  const Mesh mesh = mesh_disk(1.0, static_cast<int>(state.range(0)));
  const ProblemWorkspace ws = make_workspace(d, mesh);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_problem(Problem::Dirichlet, ws, 6));
  }
  state.SetLabel(std::to_string(ws.space.dof_count) + " dofs");
}
BENCHMARK(BM_DirichletSolve)->Arg(3)->Arg(4)->Arg(5)->Unit(benchmark::kMillisecond);

void BM_SteklovSolve(benchmark::State& state) {
  const Domain d = make_disk(1.0);
  const Mesh mesh = mesh_disk(1.0, static_cast<int>(state.range(0)));
  const ProblemWorkspace ws = make_workspace(d, mesh);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_problem(Problem::Steklov, ws, 6));
  }
}
BENCHMARK(BM_SteklovSolve)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_BucklingSolve(benchmark::State& state) {
  const Domain d = make_disk(1.0);
  const Mesh mesh = mesh_disk(1.0, static_cast<int>(state.range(0)));
  const ProblemWorkspace ws = make_workspace(d, mesh);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_problem(Problem::Buckling, ws, 2));
  }
}
BENCHMARK(BM_BucklingSolve)->Arg(3)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
