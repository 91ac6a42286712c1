#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ess/demand_curve.hpp"
#include "ess/model.hpp"

namespace ess {

struct Disabled {
  bool operator==(const Disabled&) const = default;
};

struct FixedQuantity {
  double mw = 0.0;  // MW.s for RocofControl
  bool operator==(const FixedQuantity&) const = default;
};

struct DemandCurveMode {
  ReserveDemandCurve curve;
  bool operator==(const DemandCurveMode&) const = default;
};

using RequirementMode = std::variant<Disabled, FixedQuantity, DemandCurveMode>;

/// How one service is procured in an interval. Direction follows ess::direction(service).
struct ServiceRequirement {
  ServiceKind service = ServiceKind::RegulationRaise;
  RequirementMode mode = Disabled{};

  bool enabled() const { return !std::holds_alternative<Disabled>(mode); }
  bool operator==(const ServiceRequirement&) const = default;
};

struct ClearingInput {
  std::size_t interval = 0;
  double demand_mw = 0.0;
  std::vector<ServiceRequirement> requirements;
  /// Online synchronous units (and any facility whose virtual inertia is credited
  /// unconditionally). Uncommitted synchronous units are not dispatched.
  std::set<std::string> committed;
  /// Cap on cleared non-synchronous generation (nomogram limit).
  std::optional<double> nonsync_limit_mw;
};

struct DispatchResult {
  std::size_t interval = 0;
  double demand_mw = 0.0;
  /// Cleared quantity per facility per service. Every facility in the registry has an entry.
  std::map<std::string, ServiceArray> cleared;
  /// Marginal prices: energy in $/MWh, services in $/MW/h (RocofControl $/MW.s/h).
  ServiceArray prices{};
  ServiceArray service_totals{};
  ServiceArray shortfall{};
  std::set<std::string> committed;
  double committed_inertia_mws = 0.0;
  double shed_mw = 0.0;
  double excess_mw = 0.0;
  double curtailed_vre = 0.0;
  /// LP objective over the interval in $ (demand-curve benefit enters negatively).
  double objective_cost = 0.0;
  std::vector<std::string> binding_constraints;

  double cleared_mw(const std::string& facility, ServiceKind s) const;
};

/// Co-optimized clearing of energy and every enabled service for one interval.
/// Scarcity is priced through shed/shortfall variables at the market price cap,
/// so any valid input yields a result.
DispatchResult clear_interval(const Registry& registry, const ClearingInput& input);

/// Positional form mirroring the operation contract.
DispatchResult clear_interval(const Registry& registry, std::size_t interval, double demand_mw,
                              const std::vector<ServiceRequirement>& requirements,
                              const std::set<std::string>& committed);

struct Curtailment {
  double curtailed_mw = 0.0;
  double curtailed_fraction = 0.0;
};

/// VRE availability minus cleared VRE energy. Throws Error(MismatchedInterval)
/// when `result` belongs to a different interval.
Curtailment compute_curtailment(const Registry& registry, const DispatchResult& result, std::size_t interval);

}  // namespace ess
