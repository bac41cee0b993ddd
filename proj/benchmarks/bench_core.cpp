#include <aniso/fields.hpp>
#include <aniso/geometry.hpp>
#include <aniso/meshgen.hpp>
#include <aniso/poisson.hpp>
#include <aniso/rt_interp.hpp>
#include <aniso/sobolev.hpp>

#include <benchmark/benchmark.h>

using namespace aniso;

namespace {

void BM_DecomposeMesh(benchmark::State& state) {
  auto mesh = aniso_grid_2d(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)) * 10);
  for (auto _ : state) benchmark::DoNotOptimize(decompose_mesh(mesh));
  state.SetItemsProcessed(state.iterations() * mesh.num_cells());
}
BENCHMARK(BM_DecomposeMesh)->Arg(8)->Arg(32);

void BM_DecomposeKuhn(benchmark::State& state) {
  auto mesh = kuhn_3d(4, 4, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(decompose_mesh(mesh));
  state.SetItemsProcessed(state.iterations() * mesh.num_cells());
}
BENCHMARK(BM_DecomposeKuhn)->Arg(4)->Arg(40);

void BM_BuildTriangulation(benchmark::State& state) {
  auto mesh = aniso_grid_2d(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(Triangulation::create(mesh));
}
BENCHMARK(BM_BuildTriangulation)->Arg(16)->Arg(64);

void BM_RtInterpolate(benchmark::State& state) {
  auto tri = Triangulation::create(aniso_grid_2d(static_cast<int>(state.range(0)), static_cast<int>(state.range(0))));
  auto rt = std::make_shared<const DofMap>(build_dofs(tri, SpaceTag::RT0));
  auto v = random_polynomial_field(2, 3, 7);
  for (auto _ : state) benchmark::DoNotOptimize(rt_interpolate(rt, v.value));
}
BENCHMARK(BM_RtInterpolate)->Arg(16)->Arg(32);

void BM_PoissonCr0(benchmark::State& state) {
  auto tri = Triangulation::create(aniso_grid_2d(static_cast<int>(state.range(0)), static_cast<int>(state.range(0))));
  auto sys = assemble_poisson(tri, SpaceTag::CR0, builtin_scalar("sinsin"));
  for (auto _ : state) benchmark::DoNotOptimize(solve_poisson(sys));
}
BENCHMARK(BM_PoissonCr0)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SobolevL2Dccr(benchmark::State& state) {
  auto tri = Triangulation::create(needle_2d(0.01));
  auto dofs = std::make_shared<const DofMap>(build_dofs(tri, SpaceTag::DCCR));
  auto w = build_face_weights(*tri, 2);
  for (auto _ : state) benchmark::DoNotOptimize(sobolev_constant_l2(dofs, w));
}
BENCHMARK(BM_SobolevL2Dccr)->Unit(benchmark::kMillisecond);

void BM_AscentCr(benchmark::State& state) {
  auto tri = Triangulation::create(aniso_grid_2d(4, 4));
  auto dofs = std::make_shared<const DofMap>(build_dofs(tri, SpaceTag::CR));
  auto w = build_face_weights(*tri, 4);
  AscentOptions opt;
  opt.restarts = 2;
  for (auto _ : state) benchmark::DoNotOptimize(sobolev_constant_lq_lp(dofs, w, 2, opt));
}
BENCHMARK(BM_AscentCr)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
