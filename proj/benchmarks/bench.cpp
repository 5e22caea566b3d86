// Timings for the hot paths: the within fit, rank-one style deletions
// against brute-force refits, the full pair sweep, and the end-to-end
// report. Panel size is the benchmark argument (number of units).

#include <benchmark/benchmark.h>

#include <cstdint>

#include "paneldiag/deletion.hpp"
#include "paneldiag/dgp.hpp"
#include "paneldiag/estimator.hpp"
#include "paneldiag/influence.hpp"
#include "paneldiag/panel.hpp"

namespace {

paneldiag::PanelDataset make_panel(int n_units) {
  paneldiag::DgpConfig config;
  config.seed = 7;
  config.n_units = n_units;
  return paneldiag::generate(config);
}

void bm_fit_within(benchmark::State& state) {
  const paneldiag::PanelDataset panel = make_panel(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(paneldiag::fit_within(panel));
}

void bm_leave_one_out_all(benchmark::State& state) {
  const paneldiag::PanelDataset panel = make_panel(state.range(0));
  const paneldiag::FixedEffectsFit fit = paneldiag::fit_within(panel);
  const paneldiag::HatBlocks hat(fit);
  for (auto _ : state)
    for (int i = 0; i < panel.n_units(); ++i)
      benchmark::DoNotOptimize(paneldiag::leave_one_out(fit, hat, i));
}

void bm_refit_all(benchmark::State& state) {
  const paneldiag::PanelDataset panel = make_panel(state.range(0));
  for (auto _ : state)
    for (int i = 0; i < panel.n_units(); ++i)
      benchmark::DoNotOptimize(paneldiag::brute_force_refit(panel, {i}));
}

void bm_deletion_sweep(benchmark::State& state) {
  const paneldiag::PanelDataset panel = make_panel(state.range(0));
  const paneldiag::FixedEffectsFit fit = paneldiag::fit_within(panel);
  const paneldiag::HatBlocks hat(fit);
  for (auto _ : state)
    benchmark::DoNotOptimize(paneldiag::deletion_sweep(fit, hat));
}

void bm_influence_report(benchmark::State& state) {
  const paneldiag::PanelDataset panel = make_panel(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(paneldiag::compute_influence_report(panel));
}

}  // namespace

BENCHMARK(bm_fit_within)->Arg(100)->Arg(400)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_leave_one_out_all)->Arg(100)->Arg(400)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_refit_all)->Arg(100)->Arg(400)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_deletion_sweep)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_influence_report)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
