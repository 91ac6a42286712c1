// essim: command-line front end for the market and frequency-security simulator.
//
// Exit codes: 0 success, 1 validation error, 2 runtime error.

#include <CLI11.hpp>
#include <iostream>

#include "ess/error.hpp"
#include "ess/nomogram.hpp"
#include "ess/reserve.hpp"
#include "ess/rocof.hpp"
#include "ess/scenario.hpp"
#include "ess/simulation.hpp"
#include "ess/text_table.hpp"

namespace {

int cmd_run(const std::string& scenario_path, const std::string& out_dir, unsigned threads) {
  const ess::Scenario sc = ess::load_scenario(scenario_path);
  const ess::RunReport report = ess::run(sc, ess::RunOptions{threads});
  const auto files = ess::emit_outputs(report, out_dir);
  std::cout << "scenario " << report.scenario << ": " << report.intervals.size() << " intervals, "
            << files.size() << " files written to " << out_dir << "\n"
            << "  total_cost " << ess::format_sig6(report.total_cost) << "\n"
            << "  curtailed_fraction " << ess::format_sig6(report.curtailed_fraction) << "\n"
            << "  intervention_count " << report.intervention_count << "\n"
            << "  insecure_intervals " << report.insecure_intervals << "\n";
  return 0;
}

int cmd_validate(const std::string& scenario_path) {
  const ess::Scenario sc = ess::load_scenario(scenario_path);
  std::cout << "ok: " << sc.name << " (" << ess::to_string(sc.market_mode) << ", " << sc.intervals << " intervals, "
            << sc.registry.size() << " facilities, " << sc.registry.offers().size() << " offers)\n";
  return 0;
}

int cmd_score_rocof(const std::string& trace_path, double tau_ref, double m_max, double p_max) {
  const ess::ResponseTrace trace = ess::load_response_trace(trace_path);
  const ess::ExponentialFit fit = ess::fit_exponential(trace);
  const double mult = ess::speed_multiplier(fit, tau_ref, m_max);
  std::cout << "r_max_mw,tau_s,rmse_mw,saturated,tau_reference_s,multiplier";
  if (p_max > 0) std::cout << ",accredited_mw";
  std::cout << "\n"
            << ess::format_sig6(fit.r_max) << ',' << ess::format_sig6(fit.tau) << ',' << ess::format_sig6(fit.rmse)
            << ',' << (fit.saturated ? 1 : 0) << ',' << ess::format_sig6(tau_ref) << ',' << ess::format_sig6(mult);
  if (p_max > 0) {
    ess::Facility f;
    f.id = "scored";
    f.p_max = p_max;
    std::cout << ',' << ess::format_sig6(ess::accredited_quantity(f, fit, mult));
  }
  std::cout << "\n";
  return 0;
}

int cmd_build_ordc(const std::string& errors_path, double cap, int steps) {
  const ess::ErrorSampleSet set = ess::load_error_samples(errors_path);
  const ess::ReserveDemandCurve curve = ess::build_demand_curve(set, cap, steps);
  ess::write_curve_table(std::cout, curve);
  return 0;
}

int cmd_nomogram(const std::string& table_path, double nonsync) {
  const ess::NomogramTable table = ess::load_nomogram(table_path);
  std::cout << "label,nonsync_limit_mw,feasible\n";
  const auto feasible = ess::feasible_combinations(table, nonsync);
  for (const auto& r : table.rows()) {
    const bool ok = std::find(feasible.begin(), feasible.end(), r.label) != feasible.end();
    std::cout << r.label << ',' << ess::format_sig6(r.nonsync_limit_mw) << ',' << (ok ? 1 : 0) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Energy and essential-system-services market simulator"};
  app.require_subcommand(1);

  std::string scenario, out_dir, path;
  unsigned threads = 0;
  double tau_ref = ess::kDefaultTauReference, m_max = ess::kDefaultMaxMultiplier, p_max = 0.0;
  double cap = 15000.0, nonsync = 0.0;
  int steps = 10;

  auto* run = app.add_subcommand("run", "Run a scenario and write result tables");
  run->add_option("scenario", scenario, "Scenario file")->required();
  run->add_option("-o,--out", out_dir, "Output directory")->required();
  run->add_option("--threads", threads, "Worker threads (0 = hardware concurrency)");

  auto* validate = app.add_subcommand("validate", "Load and validate a scenario");
  validate->add_option("scenario", scenario, "Scenario file")->required();

  auto* score = app.add_subcommand("score-rocof", "Fit an exponential reference to a response trace");
  score->add_option("trace", path, "Two-column t_s,output_mw table")->required();
  score->add_option("--tau-ref", tau_ref, "Reference time constant in seconds")->check(CLI::PositiveNumber);
  score->add_option("--m-max", m_max, "Multiplier cap")->check(CLI::Range(1.0, 1e9));
  score->add_option("--p-max", p_max, "Facility capacity in MW; prints the accredited quantity");

  auto* ordc = app.add_subcommand("build-ordc", "Build a reserve demand curve from forecast errors");
  ordc->add_option("errors", path, "Error sample table")->required();
  ordc->add_option("--cap", cap, "Price cap in $/MW/h")->check(CLI::PositiveNumber);
  ordc->add_option("--steps", steps, "Number of quantile breakpoints")->check(CLI::Range(2, 100000));

  auto* nomo = app.add_subcommand("nomogram", "List feasible unit combinations for a non-synchronous level");
  nomo->add_option("table", path, "Nomogram table")->required();
  nomo->add_option("--nonsync", nonsync, "Non-synchronous generation in MW")->required()->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (*run) return cmd_run(scenario, out_dir, threads);
    if (*validate) return cmd_validate(scenario);
    if (*score) return cmd_score_rocof(path, tau_ref, m_max, p_max);
    if (*ordc) return cmd_build_ordc(path, cap, steps);
    if (*nomo) return cmd_nomogram(path, nonsync);
  } catch (const ess::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ess::is_validation_error(e.code()) ? 1 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
