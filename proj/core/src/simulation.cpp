#include "ess/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "ess/error.hpp"
#include "ess/rocof.hpp"
#include "ess/text_table.hpp"

namespace ess {

namespace fs = std::filesystem;

std::vector<ServiceRequirement> resolve_requirements(const Scenario& sc) {
  std::vector<ServiceRequirement> out;
  const double contingency = sc.contingency.size_mw;
  for (const auto& rule : sc.requirements) {
    ServiceRequirement r;
    r.service = rule.service;
    switch (rule.kind) {
      case RequirementRule::Kind::Disabled: r.mode = Disabled{}; break;
      case RequirementRule::Kind::Fixed: r.mode = FixedQuantity{rule.mw}; break;
      case RequirementRule::Kind::LargestContingency: r.mode = FixedQuantity{contingency}; break;
      case RequirementRule::Kind::LegacyHeadroom:
        r.mode = FixedQuantity{legacy_headroom_requirement(contingency)};
        break;
      case RequirementRule::Kind::MinInertia:
        r.mode = FixedQuantity{min_inertia_for_rocof(contingency, sc.limits.max_rocof, sc.limits.f0)};
        break;
      case RequirementRule::Kind::Product:
        if (!sc.errors) throw Error(ErrorCode::ValidationError, "product requirement without error samples");
        r = reserve_product(rule.product, *sc.errors, sc.reserve);
        break;
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<double> interval_demand(const Scenario& sc) {
  std::vector<double> d = sc.demand_mw;
  if (sc.demand_noise_mw > 0) {
    std::mt19937_64 rng(sc.seed);
    std::normal_distribution<double> noise(0.0, sc.demand_noise_mw);
    for (double& v : d) v = std::max(0.0, v + noise(rng));
  }
  return d;
}

namespace {

std::vector<Responder> responders_for(const Scenario& sc, const DispatchResult& dispatch) {
  std::vector<Responder> out;
  for (const auto& [id, q] : dispatch.cleared) {
    const Facility& f = sc.registry.facility(id);
    auto add = [&](ServiceKind s, double tau, double delay) {
      const double mw = q[index_of(s)];
      if (mw > 0) out.push_back(Responder{mw, tau, delay});
    };
    add(ServiceKind::FastFrequencyResponse, 0.0, sc.contingency.ffr_delay_s);
    add(ServiceKind::ContingencyRaiseFast, f.pfr_tau, 0.0);
    add(ServiceKind::ContingencyRaiseSlow, sc.contingency.slow_tau_s, 0.0);
    add(ServiceKind::ContingencyRaiseDelayed, sc.contingency.delayed_tau_s, 0.0);
  }
  return out;
}

Error with_interval(const Error& e, std::size_t i) {
  return Error(e.code(), "interval " + std::to_string(i) + ": " + e.detail());
}

void clear_and_simulate(const Scenario& sc, IntervalRecord& rec) {
  ClearingInput in;
  in.interval = rec.interval;
  in.demand_mw = rec.demand_mw;
  in.requirements = rec.requirements;
  in.committed = rec.commitment.committed;
  in.nonsync_limit_mw = rec.commitment.nonsync_limit_mw;
  rec.dispatch = clear_interval(sc.registry, in);
  rec.curtailment = compute_curtailment(sc.registry, rec.dispatch, rec.interval);

  rec.contingency_mw = sc.contingency.size_mw;
  rec.inertia_mws = rec.dispatch.committed_inertia_mws + rec.dispatch.service_totals[index_of(ServiceKind::RocofControl)];
  rec.responders = responders_for(sc, rec.dispatch);
  SimulationSettings settings;
  settings.load_damping_mw_per_hz = sc.contingency.load_damping_mw_per_hz;
  settings.horizon_s = sc.contingency.horizon_s;
  settings.dt_s = sc.contingency.dt_s;
  rec.trace = simulate_contingency(rec.inertia_mws, rec.contingency_mw, rec.responders, sc.limits, settings);
  rec.verdict = check_limits(rec.trace, sc.limits);
}

}  // namespace

RunReport run(const Scenario& sc, const RunOptions& options) {
  RunReport report;
  report.scenario = sc.name;
  report.market_mode = sc.market_mode;
  report.interval_minutes = sc.registry.config().interval_minutes;
  for (const auto& [id, f] : sc.registry.facilities()) report.facility_tech[id] = f.tech;

  const std::vector<ServiceRequirement> requirements = resolve_requirements(sc);
  const std::vector<double> demand = interval_demand(sc);

  std::set<std::string> untabled_sync;
  const std::set<std::string> tabled = sc.nomogram ? sc.nomogram->referenced_units() : std::set<std::string>{};
  for (const auto& [id, f] : sc.registry.facilities()) {
    if (f.is_synchronous() && !tabled.count(id)) untabled_sync.insert(id);
  }
  const double inertia_floor =
      sc.nomogram_inertia_floor.from_rocof_limit
          ? min_inertia_for_rocof(sc.contingency.size_mw, sc.limits.max_rocof, sc.limits.f0)
          : sc.nomogram_inertia_floor.mws;

  // Commitment is decided sequentially; the remaining stages fan out.
  report.intervals.resize(sc.intervals);
  for (std::size_t i = 0; i < sc.intervals; ++i) {
    IntervalRecord& rec = report.intervals[i];
    rec.interval = i;
    rec.demand_mw = demand[i];
    rec.requirements = requirements;
    try {
      for (const auto& [id, f] : sc.registry.facilities()) {
        const double avail = f.available_mw(i);
        rec.facility_available_mw[id] = avail;
        if (f.is_non_synchronous_generation()) rec.nonsync_available_mw += avail;
        if (f.tech == Technology::InverterVre) rec.vre_available_mw += avail;
      }
      if (sc.nomogram) {
        rec.commitment = select_commitment(*sc.nomogram, sc.registry, rec.nonsync_available_mw, inertia_floor,
                                           untabled_sync);
      } else {
        rec.commitment.committed = untabled_sync;
        for (const auto& id : untabled_sync) rec.commitment.commitment_cost += sc.registry.facility(id).commitment_cost;
        rec.commitment.inertia_mws = total_system_inertia(sc.registry, untabled_sync);
      }
    } catch (const Error& e) {
      throw with_interval(e, i);
    }
  }

  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, sc.intervals)));
  std::vector<std::exception_ptr> errors(sc.intervals);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < sc.intervals; i = next++) {
      try {
        clear_and_simulate(sc, report.intervals[i]);
      } catch (const Error& e) {
        errors[i] = std::make_exception_ptr(with_interval(e, i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<CommitmentDecision> decisions;
  for (const auto& rec : report.intervals) {
    report.vre_available_mw_total += rec.vre_available_mw;
    report.curtailed_mw_total += rec.curtailment.curtailed_mw;
    report.total_cost += rec.dispatch.objective_cost + rec.commitment.commitment_cost;
    if (!rec.verdict.overall) ++report.insecure_intervals;
    decisions.push_back(rec.commitment);
  }
  report.intervention_count = intervention_count(decisions);
  report.curtailed_fraction =
      report.vre_available_mw_total > 0 ? report.curtailed_mw_total / report.vre_available_mw_total : 0.0;

  if (sc.intervals > 0) {
    std::vector<ServiceKind> priced{ServiceKind::Energy};
    for (const auto& r : requirements) {
      if (r.enabled()) priced.push_back(r.service);
      if (const auto* dc = std::get_if<DemandCurveMode>(&r.mode)) report.curves.emplace_back(r.service, dc->curve);
    }
    for (auto s : priced) {
      std::vector<double> prices;
      for (const auto& rec : report.intervals) prices.push_back(rec.dispatch.prices[index_of(s)]);
      std::sort(prices.begin(), prices.end(), std::greater<>());
      report.price_duration.emplace_back(s, std::move(prices));
    }
  }
  return report;
}

void write_trace_table(std::ostream& out, const FrequencyTrace& trace) {
  out << "t_s,frequency_hz\n";
  for (std::size_t k = 0; k < trace.time_s.size(); ++k)
    out << format_sig6(trace.time_s[k]) << ',' << format_sig6(trace.frequency_hz[k]) << '\n';
}

void write_curve_table(std::ostream& out, const ReserveDemandCurve& curve) {
  out << "reserve_mw,price\n";
  for (const auto& bp : curve.breakpoints) out << format_sig6(bp.reserve_mw) << ',' << format_sig6(bp.price) << '\n';
}

namespace {

template <class Body>
void write_file(const fs::path& dir, const std::string& name, std::vector<fs::path>& written, Body&& body) {
  const fs::path path = dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  body(out);
  out.close();
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
  written.push_back(path);
}

std::string flag(bool b) { return b ? "1" : "0"; }

}  // namespace

std::vector<fs::path> emit_outputs(const RunReport& report, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) throw Error(ErrorCode::IoError, "cannot create directory " + out_dir.string());

  std::vector<fs::path> written;
  const auto num = format_sig6;

  if (!report.intervals.empty()) {
    write_file(out_dir, "results.csv", written, [&](std::ostream& f) {
      f << "interval,facility,tech,service,quantity_mw,available_mw,price\n";
      for (const auto& rec : report.intervals) {
        for (const auto& [id, q] : rec.dispatch.cleared) {
          const std::string tech(to_string(report.facility_tech.at(id)));
          const double avail = rec.facility_available_mw.at(id);
          for (auto s : kAllServices) {
            const double mw = q[index_of(s)];
            if (s != ServiceKind::Energy && mw == 0.0) continue;
            f << rec.interval << ',' << id << ',' << tech << ',' << to_string(s) << ',' << num(mw) << ','
               << num(avail) << ',' << num(rec.dispatch.prices[index_of(s)]) << '\n';
          }
        }
      }
    });
    write_file(out_dir, "intervals.csv", written, [&](std::ostream& f) {
      f << "interval,demand_mw,shed_mw,vre_available_mw,curtailed_mw,nonsync_available_mw,nonsync_limit_mw,"
            "combination,directed,commitment_cost,objective_cost,energy_price,inertia_mws,contingency_mw,"
            "rocof_hz_s,nadir_hz,nadir_time_s,settling_hz,rocof_ok,nadir_ok,settling_ok,secure\n";
      for (const auto& rec : report.intervals) {
        const auto& c = rec.commitment;
        f << rec.interval << ',' << num(rec.demand_mw) << ',' << num(rec.dispatch.shed_mw) << ','
           << num(rec.vre_available_mw) << ',' << num(rec.curtailment.curtailed_mw) << ','
           << num(rec.nonsync_available_mw) << ',' << (c.nonsync_limit_mw ? num(*c.nonsync_limit_mw) : "") << ','
           << c.chosen_label.value_or("") << ',' << flag(c.directed) << ',' << num(c.commitment_cost) << ','
           << num(rec.dispatch.objective_cost) << ',' << num(rec.dispatch.prices[index_of(ServiceKind::Energy)]) << ','
           << num(rec.inertia_mws) << ',' << num(rec.contingency_mw) << ',' << num(rec.trace.rocof_initial) << ','
           << num(rec.trace.nadir) << ',' << num(rec.trace.nadir_time) << ',' << num(rec.trace.settling_frequency)
           << ',' << flag(rec.verdict.rocof_ok) << ',' << flag(rec.verdict.nadir_ok) << ','
           << flag(rec.verdict.settling_ok) << ',' << flag(rec.verdict.overall) << '\n';
      }
    });
    write_file(out_dir, "price_duration.csv", written, [&](std::ostream& f) {
      f << "service,rank,price\n";
      for (const auto& [s, prices] : report.price_duration) {
        for (std::size_t k = 0; k < prices.size(); ++k) f << to_string(s) << ',' << k << ',' << num(prices[k]) << '\n';
      }
    });
    for (const auto& [s, curve] : report.curves) {
      write_file(out_dir, "curve_" + std::string(to_string(s)) + ".csv", written,
                 [&](std::ostream& f) { write_curve_table(f, curve); });
    }
    for (const auto& rec : report.intervals) {
      std::ostringstream name;
      name << "trace_" << std::setw(4) << std::setfill('0') << rec.interval << ".csv";
      write_file(out_dir, name.str(), written, [&](std::ostream& f) { write_trace_table(f, rec.trace); });
    }
  }

  write_file(out_dir, "summary.csv", written, [&](std::ostream& f) {
    f << "metric,value\n"
     << "scenario," << report.scenario << '\n'
     << "market," << to_string(report.market_mode) << '\n'
     << "interval_minutes," << report.interval_minutes << '\n'
     << "intervals," << report.intervals.size() << '\n'
     << "total_cost," << num(report.total_cost) << '\n'
     << "vre_available_mw," << num(report.vre_available_mw_total) << '\n'
     << "curtailed_mw," << num(report.curtailed_mw_total) << '\n'
     << "curtailed_fraction," << num(report.curtailed_fraction) << '\n'
     << "intervention_count," << report.intervention_count << '\n'
     << "insecure_intervals," << report.insecure_intervals << '\n';
  });
  return written;
}

}  // namespace ess
