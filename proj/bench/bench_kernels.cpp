// Parallel kernels against their serial references, plus dense vs rank-one apply.
#include <benchmark/benchmark.h>
#include <omp.h>

#include "uos/decoders.hpp"
#include "uos/harness.hpp"
#include "uos/minkowski.hpp"
#include "uos/random.hpp"
#include "uos/sensing.hpp"

using namespace uos;

namespace {

const PointCloud& square_cloud() {
  static const PointCloud cloud = sample_unit_square(1'000'000, 1);
  return cloud;
}

void BM_BoxCounts(benchmark::State& state) {
  const auto ladder = dyadic_ladder(1, 8);
  for (auto _ : state) benchmark::DoNotOptimize(box_counts(square_cloud(), ladder));
}

void BM_BoxCountsSerial(benchmark::State& state) {
  const auto ladder = dyadic_ladder(1, 8);
  for (auto _ : state) benchmark::DoNotOptimize(box_counts_serial(square_cloud(), ladder));
}

struct ExhaustiveCase {
  Vector y;
  MeasurementEnsemble ensemble;
};

const ExhaustiveCase& exhaustive_case() {
  static const ExhaustiveCase c = [] {
    const auto ens = sample_ensemble(4, {1, 1}, 11);
    const auto x = sample_uos(ens, 8, UniformLabels{}, 1.0, 12);
    auto meas = MeasurementEnsemble::build(EnsembleKind::Gaussian, 20, 4, 8, 13);
    Vector y = meas.apply(x.data);
    return ExhaustiveCase{std::move(y), std::move(meas)};
  }();
  return c;
}

void BM_Exhaustive(benchmark::State& state) {
  const auto& c = exhaustive_case();
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_decode(c.y, c.ensemble, 2, {1, 1}, {}, 14));
}

void BM_ExhaustiveSerial(benchmark::State& state) {
  const auto& c = exhaustive_case();
  for (auto _ : state) benchmark::DoNotOptimize(exhaustive_decode_serial(c.y, c.ensemble, 2, {1, 1}, {}, 14));
}

ExperimentConfig phase_config() {
  ExperimentConfig c;
  c.shape = {10, 12, {1, 2}};
  c.assignment = UniformLabels{};
  c.k_grid = {40, 60, 80};
  c.trials_per_k = 4;
  c.decode.restarts = 2;
  c.master_seed = 5;
  return c;
}

void BM_Phase(benchmark::State& state) {
  const auto c = phase_config();
  for (auto _ : state) benchmark::DoNotOptimize(run_phase(c, omp_get_max_threads()));
}

void BM_PhaseSerial(benchmark::State& state) {
  const auto c = phase_config();
  for (auto _ : state) benchmark::DoNotOptimize(run_phase_serial(c));
}

// Argument is the side length of a square m x m matrix; k = m * m / 2 measurements.
void apply_bench(benchmark::State& state, EnsembleKind kind) {
  const int m = static_cast<int>(state.range(0));
  const int k = m * m / 2;
  const auto meas = MeasurementEnsemble::build(kind, k, m, m, 21);
  Rng rng = make_rng(22);
  const Matrix x = gaussian_matrix(m, m, rng);
  for (auto _ : state) benchmark::DoNotOptimize(meas.apply(x));
  state.counters["stored_values"] = static_cast<double>(meas.stored_values());
}

void BM_ApplyGaussian(benchmark::State& state) { apply_bench(state, EnsembleKind::Gaussian); }
void BM_ApplyRankOne(benchmark::State& state) { apply_bench(state, EnsembleKind::RankOne); }

}  // namespace

BENCHMARK(BM_BoxCounts)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BoxCountsSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Exhaustive)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExhaustiveSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Phase)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PhaseSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ApplyGaussian)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_ApplyRankOne)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
