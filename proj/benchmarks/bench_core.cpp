#include <benchmark/benchmark.h>

#include <numbers>

#include "fcqkd/exact_oracle.hpp"
#include "fcqkd/montecarlo.hpp"
#include "fcqkd/protocol.hpp"
#include "fcqkd/tandem_link.hpp"

namespace {

using namespace fcqkd;
constexpr double kPi = std::numbers::pi;

void BM_SidebandPowers(benchmark::State& state) {
  const auto a = make_modulator(ModulatorKind::UM, 0.1, 0.3, 0.0);
  const auto b = make_modulator(ModulatorKind::AM, 0.05, kPi / 4, 1.0);
  LinkSpec link;
  link.link_phase = 0.4;
  for (auto _ : state) benchmark::DoNotOptimize(sideband_powers(a, b, link));
}
BENCHMARK(BM_SidebandPowers);

void BM_SidebandPowersDirect(benchmark::State& state) {
  const auto a = make_modulator(ModulatorKind::UM, 0.1, 0.3, 0.0);
  const auto b = make_modulator(ModulatorKind::AM, 0.05, kPi / 4, 1.0);
  LinkSpec link;
  link.link_phase = 0.4;
  for (auto _ : state) benchmark::DoNotOptimize(sideband_powers_direct(a, b, link));
}
BENCHMARK(BM_SidebandPowersDirect);

void BM_RegenerateTable(benchmark::State& state) {
  const auto grid = default_psi_grid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(regenerate_table2(grid));
}
BENCHMARK(BM_RegenerateTable)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_ExactTandemSpectrum(benchmark::State& state) {
  const double m = static_cast<double>(state.range(0)) / 100.0;
  const auto a = make_modulator(ModulatorKind::UM, m, 0.0, 0.0);
  const auto b = make_modulator(ModulatorKind::PM, m / 2, 0.0, kPi);
  const int order = default_harmonic_order(m);
  for (auto _ : state) benchmark::DoNotOptimize(exact_tandem_spectrum(a, b, LinkSpec{}, order));
}
BENCHMARK(BM_ExactTandemSpectrum)->Arg(1)->Arg(10)->Arg(100);

void BM_SmallSignalLattice(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(small_signal_lattice(0.1));
}
BENCHMARK(BM_SmallSignalLattice)->Unit(benchmark::kMillisecond);

void BM_RunSession(benchmark::State& state) {
  SessionConfig cfg;
  cfg.protocol = Protocol::BB84;
  cfg.alice = make_modulator(ModulatorKind::UM, 0.1, -kPi / 4, 0);
  cfg.bob = make_modulator(ModulatorKind::UM, 0.1, kPi / 4, 0);
  cfg.n_pulses = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_session(cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_RunSession)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
