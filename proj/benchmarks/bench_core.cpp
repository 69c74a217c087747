#include <benchmark/benchmark.h>

#include <numbers>

#include "ctom/controls.hpp"
#include "ctom/estimation.hpp"
#include "ctom/fisher.hpp"
#include "ctom/sampling.hpp"

using namespace ctom;

namespace {

constexpr double kPi = std::numbers::pi;

const MeasurementConfig kConfig{0.01, 200, 0.4};

ControlSetting control_for(int dim) {
  const double rate = 1.5 * 2 * kPi / kConfig.total_time();
  if (dim == 2) return single_qubit_control(kPi / 4, kPi / 4, rate);
  return named_setting("XY+YZ", rate, rate);
}

void BM_ConditionedStep(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Rng rng(1);
  const DensityMatrix rho = hs_random(dim, rng);
  const Matrix u = unitary_step(build_hamiltonian(control_for(dim)), kConfig.dt);
  for (auto _ : state) {
    benchmark::DoNotOptimize(conditioned_step(rho, 0.3, u, kConfig));
  }
}
BENCHMARK(BM_ConditionedStep)->Arg(2)->Arg(4);

void BM_SimulateRecord(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Rng rng(2);
  const DensityMatrix rho = hs_random(dim, rng);
  const ControlSetting control = control_for(dim);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(simulate_record(rho, control, kConfig, ++seed));
  }
}
BENCHMARK(BM_SimulateRecord)->Arg(2)->Arg(4);

void BM_KrausPropagatorBuild(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Rng rng(3);
  const DensityMatrix rho = hs_random(dim, rng);
  const auto record = simulate_record(rho, control_for(dim), kConfig, 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(KrausPropagator(record));
  }
}
BENCHMARK(BM_KrausPropagatorBuild)->Arg(2)->Arg(4);

void BM_BatchLogLikelihood(benchmark::State& state) {
  Rng rng(4);
  const DensityMatrix truth = hs_random(4, rng);
  const auto records = simulate_records(truth, control_for(4), kConfig, 1000, 11);
  const BatchLikelihood bl(records);
  const Eigen::VectorXd c = to_pauli(hs_random(4, rng)).coeffs();
  for (auto _ : state) {
    benchmark::DoNotOptimize(bl.log_likelihood(c));
  }
}
BENCHMARK(BM_BatchLogLikelihood);

void BM_PosteriorGrid(benchmark::State& state) {
  Rng rng(5);
  const DensityMatrix truth = DensityMatrix::from_bloch(-0.4, -0.6, 0.3);
  const auto records = simulate_records(truth, control_for(2), kConfig, 200, 13);
  auto grid = std::make_shared<const CandidateGrid>(build_grid("HS-uniform-ball", 2000, 17));
  for (auto _ : state) {
    benchmark::DoNotOptimize(posterior(grid, records, 1));
  }
}
BENCHMARK(BM_PosteriorGrid);

void BM_HsRandom(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Rng rng(6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hs_random(dim, rng));
  }
}
BENCHMARK(BM_HsRandom)->Arg(2)->Arg(4);

void BM_Fidelity(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  Rng rng(7);
  const DensityMatrix a = hs_random(dim, rng);
  const DensityMatrix b = hs_random(dim, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fidelity(a, b));
  }
}
BENCHMARK(BM_Fidelity)->Arg(2)->Arg(4);

void BM_TwoQubitPositivity(benchmark::State& state) {
  Rng rng(8);
  const PauliCoefficients c = to_pauli(hs_random(4, rng));
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_two_qubit_positivity(c));
  }
}
BENCHMARK(BM_TwoQubitPositivity);

void BM_FisherMatrix(benchmark::State& state) {
  const ControlSetting control = control_for(4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(fisher_matrix(control, kConfig, {}, 2048));
  }
}
BENCHMARK(BM_FisherMatrix);

}  // namespace

BENCHMARK_MAIN();
