// Serial reference against OpenMP path for the element kernels.

#include <benchmark/benchmark.h>

#include "robin/kernels.hpp"
#include "robin/problem.hpp"

namespace {

using robin::kernels::Exec;

robin::DiskMesh mesh_for(const benchmark::State& state) {
  const int rings = static_cast<int>(state.range(0));
  return robin::DiskMesh::build(rings, 8 * rings);
}

void BM_ElementOperator(benchmark::State& state, Exec exec) {
  const auto mesh = mesh_for(state);
  const auto inst = robin::builtin_example_quartic();
  const auto coeffs = inst.coefficients();
  for (auto _ : state) benchmark::DoNotOptimize(robin::kernels::element_operator(mesh, coeffs, exec));
  state.SetItemsProcessed(state.iterations() * mesh.triangle_count());
}

void BM_MassApply(benchmark::State& state, Exec exec) {
  const auto mesh = mesh_for(state);
  const Eigen::VectorXd v = Eigen::VectorXd::LinSpaced(mesh.node_count(), -1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(robin::kernels::mass_apply(mesh, v, exec));
  state.SetItemsProcessed(state.iterations() * mesh.triangle_count());
}

void BM_CostIntegral(benchmark::State& state, Exec exec) {
  const auto mesh = mesh_for(state);
  const auto inst = robin::builtin_example_quartic();
  const Eigen::VectorXd y = Eigen::VectorXd::LinSpaced(mesh.node_count(), -1.0, 1.0);
  const Eigen::VectorXd mu = Eigen::VectorXd::Zero(mesh.node_count());
  const robin::kernels::PointIntegrand f = [&inst](const robin::Point& x, double yq, double mq) {
    return std::array<double, 2>{inst.running_cost(x, yq, mq), inst.running_cost_y(x, yq, mq)};
  };
  for (auto _ : state) benchmark::DoNotOptimize(robin::kernels::integrate_with_gradient(mesh, y, mu, f, exec));
  state.SetItemsProcessed(state.iterations() * mesh.triangle_count());
}

}  // namespace

BENCHMARK_CAPTURE(BM_ElementOperator, serial, Exec::serial)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK_CAPTURE(BM_ElementOperator, parallel, Exec::parallel)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK_CAPTURE(BM_MassApply, serial, Exec::serial)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK_CAPTURE(BM_MassApply, parallel, Exec::parallel)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK_CAPTURE(BM_CostIntegral, serial, Exec::serial)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK_CAPTURE(BM_CostIntegral, parallel, Exec::parallel)->Arg(16)->Arg(32)->Arg(64);

BENCHMARK_MAIN();
