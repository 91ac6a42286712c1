#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "ess/clearing.hpp"
#include "ess/frequency.hpp"
#include "ess/nomogram.hpp"
#include "ess/scenario.hpp"

namespace ess {

struct IntervalRecord {
  std::size_t interval = 0;
  double demand_mw = 0.0;
  double nonsync_available_mw = 0.0;
  double vre_available_mw = 0.0;
  std::map<std::string, double> facility_available_mw;
  std::vector<ServiceRequirement> requirements;
  CommitmentDecision commitment;
  DispatchResult dispatch;
  Curtailment curtailment;
  double contingency_mw = 0.0;
  double inertia_mws = 0.0;  // committed inertia plus cleared RocofControl
  std::vector<Responder> responders;
  FrequencyTrace trace;
  SecurityVerdict verdict;
};

struct RunReport {
  std::string scenario;
  MarketMode market_mode = MarketMode::NemLike;
  int interval_minutes = 5;
  std::map<std::string, Technology> facility_tech;
  std::vector<IntervalRecord> intervals;

  // Aggregates, all recomputable from `intervals`.
  double vre_available_mw_total = 0.0;
  double curtailed_mw_total = 0.0;
  double curtailed_fraction = 0.0;
  std::size_t intervention_count = 0;
  std::size_t insecure_intervals = 0;
  double total_cost = 0.0;  // clearing objective plus commitment cost, $
  /// Clearing prices of each enabled service sorted high to low.
  std::vector<std::pair<ServiceKind, std::vector<double>>> price_duration;
  /// Demand curves in force (one per DemandCurve-mode service).
  std::vector<std::pair<ServiceKind, ReserveDemandCurve>> curves;
};

/// Requirements for every service with a rule, derived from the scenario.
std::vector<ServiceRequirement> resolve_requirements(const Scenario& scenario);

/// Demand per interval after the optional seeded noise.
std::vector<double> interval_demand(const Scenario& scenario);

struct RunOptions {
  /// Worker threads for the per-interval clear + simulate stage; 0 picks hardware concurrency.
  unsigned threads = 0;
};

/// Per interval: commitment (nomogram), requirements, co-optimized clearing and
/// the contingency simulation of the cleared portfolio. Deterministic for a
/// given scenario and seed regardless of thread count.
RunReport run(const Scenario& scenario, const RunOptions& options = {});

/// Writes the plot-ready tables into `out_dir` and returns the written paths:
/// summary.csv always; for non-empty runs also results.csv, intervals.csv,
/// price_duration.csv, trace_NNNN.csv per interval and curve_<Service>.csv per demand curve.
std::vector<std::filesystem::path> emit_outputs(const RunReport& report, const std::filesystem::path& out_dir);

/// Plot-ready two-column tables shared by the CLI.
void write_trace_table(std::ostream& out, const FrequencyTrace& trace);
void write_curve_table(std::ostream& out, const ReserveDemandCurve& curve);

}  // namespace ess
