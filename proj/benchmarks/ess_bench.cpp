#include <benchmark/benchmark.h>

#include <cmath>
#include <filesystem>

#include "ess/clearing.hpp"
#include "ess/frequency.hpp"
#include "ess/reserve.hpp"
#include "ess/rocof.hpp"
#include "ess/scenario.hpp"
#include "ess/simulation.hpp"

namespace {

using namespace ess;

const std::filesystem::path kData(ESS_DATA_DIR);

void BM_ClearInterval(benchmark::State& state) {
  const auto sc = load_scenario(kData / "wem-small.ini");
  const auto reqs = resolve_requirements(sc);
  std::set<std::string> committed;
  for (const auto& [id, f] : sc.registry.facilities())
    if (f.is_synchronous()) committed.insert(id);
  for (auto _ : state) {
    auto r = clear_interval(sc.registry, 0, sc.demand_mw[0], reqs, committed);
    benchmark::DoNotOptimize(r.objective_cost);
  }
}
BENCHMARK(BM_ClearInterval);

void BM_SimulateContingency(benchmark::State& state) {
  const std::vector<Responder> rs{{100, 0, 0.25}, {200, 4, 0}, {150, 20, 0}};
  SimulationSettings s;
  s.load_damping_mw_per_hz = 30;
  for (auto _ : state) {
    auto tr = simulate_contingency(6000, 300, rs, {}, s);
    benchmark::DoNotOptimize(tr.nadir);
  }
}
BENCHMARK(BM_SimulateContingency);

void BM_FitExponential(benchmark::State& state) {
  ResponseTrace tr;
  for (int i = 0; i <= state.range(0); ++i) {
    const double t = 30.0 * i / state.range(0);
    tr.samples.push_back({t, 80 * (1 - std::exp(-t / 4))});
  }
  for (auto _ : state) benchmark::DoNotOptimize(fit_exponential(tr).tau);
}
BENCHMARK(BM_FitExponential)->Arg(50)->Arg(500);

void BM_BuildDemandCurve(benchmark::State& state) {
  const auto set = load_error_samples(kData / "synthetic-errors-30m.csv");
  for (auto _ : state) benchmark::DoNotOptimize(build_demand_curve(set, 1000, 10).breakpoints.size());
}
BENCHMARK(BM_BuildDemandCurve);

void BM_RunScenario(benchmark::State& state) {
  const auto sc = load_scenario(kData / (state.range(0) == 0 ? "wem-small.ini" : "nem-small.ini"));
  for (auto _ : state) benchmark::DoNotOptimize(run(sc).total_cost);
}
BENCHMARK(BM_RunScenario)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
