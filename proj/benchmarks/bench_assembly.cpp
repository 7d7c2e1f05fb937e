#include <benchmark/benchmark.h>

#include "speclab/fem.hpp"
#include "speclab/mesh.hpp"

using namespace speclab;

namespace {

void BM_AssembleStiffnessP2(benchmark::State& state) {
  const Mesh mesh = mesh_disk(1.0, static_cast<int>(state.range(0)));
  const FeSpace space = make_space(mesh, 2);
  const auto metric = MetricModel::euclidean();
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_stiffness(space, metric));
  }
  state.SetLabel(std::to_string(space.dof_count) + " dofs");
}
BENCHMARK(BM_AssembleStiffnessP2)->Arg(3)->Arg(4)->Arg(5);

void BM_AssembleMassHyperbolic(benchmark::State& state) {
  const Mesh mesh = mesh_disk(0.4, static_cast<int>(state.range(0)));
  const FeSpace space = make_space(mesh, 2);
  const auto metric = MetricModel::constant_curvature(-1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(assemble_mass(space, metric));
  }
  state.SetLabel(std::to_string(space.dof_count) + " dofs");
}
BENCHMARK(BM_AssembleMassHyperbolic)->Arg(3)->Arg(4)->Arg(5);

void BM_NormalTrace(benchmark::State& state) {
  const Mesh mesh = mesh_disk(1.0, static_cast<int>(state.range(0)));
  const FeSpace space = make_space(mesh, 2);
  const auto metric = MetricModel::euclidean();
  for (auto _ : state) {
    benchmark::DoNotOptimize(normal_trace(space, metric, 9));
  }
}
BENCHMARK(BM_NormalTrace)->Arg(4)->Arg(5);

}  // namespace
