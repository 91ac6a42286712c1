#include "ess/clearing.hpp"

#include <algorithm>
#include <cmath>

#include "ess/error.hpp"
#include "ess/lp.hpp"

namespace ess {

namespace {

constexpr double kBindTol = 1e-7;

struct OfferVar {
  const ServiceOffer* offer;
  std::size_t var;
};

struct RowTag {
  std::string tag;
  std::size_t row;
};

bool row_satisfied(const lp::Row& row, const std::vector<double>& x, double tol) {
  double a = 0.0;
  for (const auto& t : row.terms) a += t.coef * x[t.var];
  switch (row.sense) {
    case lp::Sense::LessEqual: return a <= row.rhs + tol;
    case lp::Sense::GreaterEqual: return a >= row.rhs - tol;
    case lp::Sense::Equal: return std::abs(a - row.rhs) <= tol;
  }
  return false;
}

bool feasible(const lp::Problem& p, const std::vector<double>& x) {
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j] < -1e-9 || x[j] > p.upper()[j] + 1e-9) return false;
  }
  return std::all_of(p.rows().begin(), p.rows().end(), [&](const lp::Row& r) { return row_satisfied(r, x, 1e-7); });
}

// Equal-priced offers for the same service share the cleared total in
// proportion to their offered quantity, when that keeps every constraint satisfied.
void ration_ties(const lp::Problem& p, const std::vector<OfferVar>& vars, std::vector<double>& x) {
  std::vector<bool> done(vars.size(), false);
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (done[i]) continue;
    std::vector<std::size_t> group{i};
    for (std::size_t j = i + 1; j < vars.size(); ++j) {
      if (!done[j] && vars[j].offer->service == vars[i].offer->service &&
          vars[j].offer->price == vars[i].offer->price)
        group.push_back(j);
    }
    for (auto g : group) done[g] = true;
    if (group.size() < 2) continue;
    double total = 0.0, offered = 0.0;
    for (auto g : group) {
      total += x[vars[g].var];
      offered += vars[g].offer->quantity;
    }
    if (!(offered > 0) || total <= 0) continue;
    std::vector<double> trial = x;
    for (auto g : group) trial[vars[g].var] = total * vars[g].offer->quantity / offered;
    if (feasible(p, trial)) x = std::move(trial);
  }
}

}  // namespace

double DispatchResult::cleared_mw(const std::string& facility, ServiceKind s) const {
  auto it = cleared.find(facility);
  return it == cleared.end() ? 0.0 : it->second[index_of(s)];
}

DispatchResult clear_interval(const Registry& registry, const ClearingInput& input) {
  const MarketConfig& cfg = registry.config();
  if (!std::isfinite(input.demand_mw) || input.demand_mw < 0)
    throw Error(ErrorCode::InvariantViolation, "interval " + std::to_string(input.interval) + ": demand must be >= 0");
  for (const auto& id : input.committed) (void)registry.facility(id);

  std::array<const ServiceRequirement*, kServiceCount> req{};
  for (const auto& r : input.requirements) {
    if (r.service == ServiceKind::Energy)
      throw Error(ErrorCode::InvariantViolation, "Energy cannot carry a service requirement");
    if (req[index_of(r.service)])
      throw Error(ErrorCode::InvariantViolation,
                  "duplicate requirement for " + std::string(to_string(r.service)));
    if (auto* fq = std::get_if<FixedQuantity>(&r.mode); fq && !(fq->mw >= 0 && std::isfinite(fq->mw)))
      throw Error(ErrorCode::InvariantViolation,
                  "requirement for " + std::string(to_string(r.service)) + " must be >= 0");
    if (r.enabled()) req[index_of(r.service)] = &r;
  }

  auto eligible = [&](const Facility& f) { return !f.is_synchronous() || input.committed.count(f.id) > 0; };

  lp::Problem p;
  std::vector<OfferVar> offer_vars;
  std::map<std::string, std::array<std::vector<std::size_t>, kServiceCount>, std::less<>> by_facility;
  std::array<std::vector<std::size_t>, kServiceCount> by_service;

  for (const ServiceOffer* o : registry.offers_for(input.interval)) {
    const Facility& f = registry.facility(o->facility_id);
    if (!eligible(f)) continue;
    if (o->service != ServiceKind::Energy && !req[index_of(o->service)]) continue;
    // Committed facilities already contribute their inertia through total_system_inertia.
    if (o->service == ServiceKind::RocofControl && input.committed.count(f.id)) continue;
    const std::size_t v = p.add_variable(o->price, o->quantity);
    offer_vars.push_back({o, v});
    by_facility[f.id][index_of(o->service)].push_back(v);
    by_service[index_of(o->service)].push_back(v);
  }

  std::vector<RowTag> tags;
  std::vector<std::size_t> violation_vars;
  std::vector<std::string> violation_tags;

  // Per-facility headroom and footroom coupling.
  for (const auto& [id, svc] : by_facility) {
    const Facility& f = registry.facility(id);
    const double avail = f.available_mw(input.interval);
    std::vector<lp::Term> up, down;
    bool has_lower = false;
    double energy_offered = 0.0;
    for (std::size_t s = 0; s < kServiceCount; ++s) {
      const auto kind = kAllServices[s];
      for (auto v : svc[s]) {
        if (kind == ServiceKind::Energy) {
          up.push_back({v, 1.0});
          down.push_back({v, 1.0});
          energy_offered += p.upper()[v];
        } else if (direction(kind) == Direction::Raise) {
          up.push_back({v, 1.0});
        } else if (direction(kind) == Direction::Lower) {
          down.push_back({v, -1.0});
          has_lower = true;
        }
      }
    }
    if (!up.empty()) tags.push_back({"cap:" + id, p.add_row(up, lp::Sense::LessEqual, avail)});
    // A committed unit's minimum load is limited by what it actually offered.
    double floor = 0.0;
    if (f.is_synchronous() && input.committed.count(id)) floor = std::min({f.p_min, avail, energy_offered});
    if (has_lower || floor > 0) tags.push_back({"floor:" + id, p.add_row(down, lp::Sense::GreaterEqual, floor)});
  }

  // Energy balance with priced shed and oversupply.
  std::vector<lp::Term> balance;
  for (auto v : by_service[index_of(ServiceKind::Energy)]) balance.push_back({v, 1.0});
  const std::size_t shed = p.add_variable(cfg.price_cap, input.demand_mw);
  const std::size_t excess = p.add_variable(std::max(0.0, -cfg.price_floor));
  balance.push_back({shed, 1.0});
  balance.push_back({excess, -1.0});
  const std::size_t balance_row = p.add_row(balance, lp::Sense::Equal, input.demand_mw);
  violation_vars.insert(violation_vars.end(), {shed, excess});
  violation_tags.insert(violation_tags.end(), {"shed", "excess"});

  if (input.nonsync_limit_mw) {
    std::vector<lp::Term> terms;
    for (const auto& ov : offer_vars) {
      if (ov.offer->service == ServiceKind::Energy &&
          registry.facility(ov.offer->facility_id).is_non_synchronous_generation())
        terms.push_back({ov.var, 1.0});
    }
    tags.push_back({"nonsync_limit", p.add_row(terms, lp::Sense::LessEqual, std::max(0.0, *input.nonsync_limit_mw))});
  }

  const double committed_inertia = total_system_inertia(registry, input.committed);

  std::array<std::optional<std::size_t>, kServiceCount> req_row{};
  std::array<std::optional<std::size_t>, kServiceCount> shortfall_var{};
  for (std::size_t s = 0; s < kServiceCount; ++s) {
    const ServiceRequirement* r = req[s];
    if (!r) continue;
    const auto kind = kAllServices[s];
    const double credit = kind == ServiceKind::RocofControl ? committed_inertia : 0.0;
    std::vector<lp::Term> terms;
    for (auto v : by_service[s]) terms.push_back({v, 1.0});
    const std::string name(to_string(kind));
    if (const auto* fq = std::get_if<FixedQuantity>(&r->mode)) {
      const double need = fq->mw - credit;
      if (need > 0) {
        const std::size_t sv = p.add_variable(cfg.price_cap, need);
        terms.push_back({sv, 1.0});
        shortfall_var[s] = sv;
        violation_vars.push_back(sv);
        violation_tags.push_back("shortfall:" + name);
      }
      req_row[s] = p.add_row(terms, lp::Sense::GreaterEqual, need);
    } else if (const auto* dc = std::get_if<DemandCurveMode>(&r->mode)) {
      double prev = 0.0;
      for (const auto& bp : dc->curve.breakpoints) {
        const double size = bp.reserve_mw - prev;
        prev = bp.reserve_mw;
        if (size <= 0 || bp.price <= 0) continue;
        terms.push_back({p.add_variable(-bp.price, size), -1.0});
      }
      req_row[s] = p.add_row(terms, lp::Sense::GreaterEqual, -credit);
    }
    tags.push_back({"req:" + name, *req_row[s]});
  }

  lp::Solution sol = lp::solve(p);
  switch (sol.status) {
    case lp::Status::Optimal: break;
    case lp::Status::Unbounded:
      throw Error(ErrorCode::UnboundedProblem, "interval " + std::to_string(input.interval));
    case lp::Status::Infeasible:
      throw Error(ErrorCode::NumericalFailure,
                  "interval " + std::to_string(input.interval) + ": LP reported infeasible despite violation pricing");
    case lp::Status::IterationLimit:
      throw Error(ErrorCode::NumericalFailure, "interval " + std::to_string(input.interval) + ": iteration limit");
  }
  ration_ties(p, offer_vars, sol.x);

  DispatchResult out;
  out.interval = input.interval;
  out.demand_mw = input.demand_mw;
  out.committed = input.committed;
  out.committed_inertia_mws = committed_inertia;
  for (const auto& [id, f] : registry.facilities()) out.cleared[id] = ServiceArray{};
  for (const auto& ov : offer_vars) {
    const double q = sol.x[ov.var];
    out.cleared[ov.offer->facility_id][index_of(ov.offer->service)] += q;
    out.service_totals[index_of(ov.offer->service)] += q;
  }
  out.shed_mw = sol.x[shed];
  out.excess_mw = sol.x[excess];
  out.prices[index_of(ServiceKind::Energy)] = sol.duals[balance_row];
  for (std::size_t s = 0; s < kServiceCount; ++s) {
    if (req_row[s]) out.prices[s] = sol.duals[*req_row[s]];
    if (shortfall_var[s]) out.shortfall[s] = sol.x[*shortfall_var[s]];
  }
  // Remove signed zeros and solver dust from prices.
  for (double& price : out.prices) {
    if (std::abs(price) < 1e-9) price = 0.0;
  }

  double obj = 0.0;
  for (std::size_t j = 0; j < p.num_variables(); ++j) obj += p.cost()[j] * sol.x[j];
  out.objective_cost = obj * cfg.interval_hours();

  for (const auto& [id, f] : registry.facilities()) {
    if (f.tech != Technology::InverterVre) continue;
    out.curtailed_vre += std::max(0.0, f.available_mw(input.interval) - out.cleared_mw(id, ServiceKind::Energy));
  }

  for (const auto& t : tags) {
    const lp::Row& row = p.rows()[t.row];
    const double slack = std::abs(sol.activity[t.row] - row.rhs);
    if (slack <= kBindTol * std::max(1.0, std::abs(row.rhs)) && std::abs(sol.duals[t.row]) > 1e-9)
      out.binding_constraints.push_back(t.tag);
  }
  for (std::size_t k = 0; k < violation_vars.size(); ++k) {
    if (sol.x[violation_vars[k]] > kBindTol) out.binding_constraints.push_back(violation_tags[k]);
  }
  return out;
}

DispatchResult clear_interval(const Registry& registry, std::size_t interval, double demand_mw,
                              const std::vector<ServiceRequirement>& requirements,
                              const std::set<std::string>& committed) {
  ClearingInput in;
  in.interval = interval;
  in.demand_mw = demand_mw;
  in.requirements = requirements;
  in.committed = committed;
  return clear_interval(registry, in);
}

Curtailment compute_curtailment(const Registry& registry, const DispatchResult& result, std::size_t interval) {
  if (result.interval != interval) {
    throw Error(ErrorCode::MismatchedInterval, "result is for interval " + std::to_string(result.interval) +
                                                   ", requested " + std::to_string(interval));
  }
  double curtailed = 0.0, available = 0.0;
  for (const auto& [id, f] : registry.facilities()) {
    if (f.tech != Technology::InverterVre) continue;
    const double avail = f.available_mw(interval);
    available += avail;
    curtailed += std::max(0.0, avail - result.cleared_mw(id, ServiceKind::Energy));
  }
  return {curtailed, available > 0 ? curtailed / available : 0.0};
}

}  // namespace ess
