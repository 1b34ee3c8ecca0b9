#include <benchmark/benchmark.h>

#include "cavcool/effective.hpp"
#include "cavcool/opalg.hpp"
#include "cavcool/oracle.hpp"
#include "cavcool/rates.hpp"
#include "cavcool/stability.hpp"

using namespace cavcool;

namespace {

SystemParams reference() {
  SystemParams p;
  p.eta = 0.1;
  p.nu = 0.1;
  p.delta_eff = 0.5;
  p.g_eff = 0.1;
  return p;
}

void BM_DeriveRateSystem(benchmark::State& state) {
  const auto p = reference();
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(opalg::derive_rate_system(p, order));
}
BENCHMARK(BM_DeriveRateSystem)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_Stationary(benchmark::State& state) {
  const auto sys = rates::assemble(reference());
  for (auto _ : state) benchmark::DoNotOptimize(rates::stationary(sys.system));
}
BENCHMARK(BM_Stationary);

void BM_IntegrateCoolingRun(benchmark::State& state) {
  const auto p = reference();
  const auto sys = rates::assemble(p);
  const double t_end = static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rates::integrate(sys.system, default_initial(100.0, p), t_end, 101));
  }
}
BENCHMARK(BM_IntegrateCoolingRun)->Arg(1000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_WeakSpectrum(benchmark::State& state) {
  const auto p = reference();
  for (auto _ : state) benchmark::DoNotOptimize(stability::spectrum(p, 2));
}
BENCHMARK(BM_WeakSpectrum);

void BM_StrongModel(benchmark::State& state) {
  const auto p = reference();
  for (auto _ : state) benchmark::DoNotOptimize(effective::strong_model(p));
}
BENCHMARK(BM_StrongModel);

void BM_OracleEvolve(benchmark::State& state) {
  const auto p = reference();
  oracle::TruncatedSpace space;
  space.n_cav = static_cast<int>(state.range(0));
  space.n_phn = static_cast<int>(state.range(1));
  const auto rho0 = oracle::initial_state(space, oracle::Occupation::fock(2));
  const std::vector<double> times{0.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(oracle::lindblad_evolve(rho0, p, times));
  state.counters["dim"] = static_cast<double>(space.dim());
}
BENCHMARK(BM_OracleEvolve)->Args({4, 12})->Args({6, 24})->Unit(benchmark::kMillisecond);

void BM_IdentitySuite(benchmark::State& state) {
  oracle::TruncatedSpace space;
  space.n_cav = 8;
  space.n_phn = 8;
  const auto p = reference();
  for (auto _ : state) benchmark::DoNotOptimize(oracle::verify_identities(space, p));
}
BENCHMARK(BM_IdentitySuite)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
