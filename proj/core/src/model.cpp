#include "ess/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "ess/error.hpp"

namespace ess {

namespace {

constexpr std::array<std::string_view, kServiceCount> kServiceNames = {
    "Energy",
    "RegulationRaise",
    "RegulationLower",
    "ContingencyRaiseFast",
    "ContingencyRaiseSlow",
    "ContingencyRaiseDelayed",
    "ContingencyLowerFast",
    "ContingencyLowerSlow",
    "ContingencyLowerDelayed",
    "FastFrequencyResponse",
    "RocofControl",
    "OperatingReserve",
};

std::string fmt_num(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

[[noreturn]] void violation(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::InvariantViolation, where + ": " + what);
}

void check_facility(const Facility& f) {
  const std::string where = "facility '" + f.id + "'";
  if (f.id.empty()) violation("facility", "empty id");
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(f.p_max) || f.p_max < 0) violation(where, "p_max must be >= 0");
  if (!finite(f.p_min) || f.p_min < 0 || f.p_min > f.p_max) violation(where, "p_min must lie in [0, p_max]");
  if (f.p_min > 0 && !f.is_synchronous()) violation(where, "p_min > 0 is only allowed for synchronous units");
  if (!finite(f.inertia_h) || f.inertia_h < 0) violation(where, "inertia_h must be >= 0");
  if (f.inertia_h > 0 && !f.is_synchronous())
    violation(where, "inertia_h must be 0 for non-synchronous plant (use virtual_inertia_mws)");
  if (f.inertia_h > 0 && !(f.mva_rating > 0)) violation(where, "mva_rating must be > 0 when inertia_h > 0");
  if (!finite(f.mva_rating) || f.mva_rating < 0) violation(where, "mva_rating must be >= 0");
  if (!finite(f.virtual_inertia_mws) || f.virtual_inertia_mws < 0)
    violation(where, "virtual_inertia_mws must be >= 0");
  if (f.virtual_inertia_mws > 0 && f.tech != Technology::InverterStorage && f.tech != Technology::Synchronous)
    violation(where, "virtual inertia is only permitted for storage or synchronous plant");
  if (f.droop && !(*f.droop > 0 && *f.droop <= 0.2)) violation(where, "droop must lie in (0, 0.2]");
  if (!finite(f.pfr_tau) || !(f.pfr_tau > 0)) violation(where, "pfr_tau must be > 0");
  if (!finite(f.commitment_cost) || f.commitment_cost < 0) violation(where, "commitment_cost must be >= 0");
  if (f.commitment_cost > 0 && !f.is_synchronous())
    violation(where, "commitment_cost applies to synchronous units only");
  for (std::size_t i = 0; i < f.availability.size(); ++i) {
    if (!finite(f.availability[i]) || f.availability[i] < 0)
      violation(where, "availability[" + std::to_string(i) + "] must be finite and >= 0");
  }
}

}  // namespace

std::string_view to_string(ServiceKind s) { return kServiceNames[index_of(s)]; }

std::optional<ServiceKind> parse_service(std::string_view name) {
  for (std::size_t i = 0; i < kServiceCount; ++i) {
    if (kServiceNames[i] == name) return kAllServices[i];
  }
  return std::nullopt;
}

std::string service_names() {
  std::string out;
  for (auto n : kServiceNames) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

Direction direction(ServiceKind s) {
  switch (s) {
    case ServiceKind::RegulationRaise:
    case ServiceKind::ContingencyRaiseFast:
    case ServiceKind::ContingencyRaiseSlow:
    case ServiceKind::ContingencyRaiseDelayed:
    case ServiceKind::FastFrequencyResponse:
    case ServiceKind::OperatingReserve:
      return Direction::Raise;
    case ServiceKind::RegulationLower:
    case ServiceKind::ContingencyLowerFast:
    case ServiceKind::ContingencyLowerSlow:
    case ServiceKind::ContingencyLowerDelayed:
      return Direction::Lower;
    case ServiceKind::Energy:
    case ServiceKind::RocofControl:
      return Direction::None;
  }
  return Direction::None;
}

std::optional<double> response_time_s(ServiceKind s) {
  switch (s) {
    case ServiceKind::ContingencyRaiseFast:
    case ServiceKind::ContingencyLowerFast:
      return 6.0;
    case ServiceKind::ContingencyRaiseSlow:
    case ServiceKind::ContingencyLowerSlow:
      return 60.0;
    case ServiceKind::ContingencyRaiseDelayed:
    case ServiceKind::ContingencyLowerDelayed:
      return 300.0;
    case ServiceKind::FastFrequencyResponse:
      return 2.0;
    default:
      return std::nullopt;
  }
}

std::string_view to_string(Technology t) {
  switch (t) {
    case Technology::Synchronous: return "Synchronous";
    case Technology::InverterVre: return "InverterVre";
    case Technology::InverterStorage: return "InverterStorage";
    case Technology::DemandSide: return "DemandSide";
  }
  return "Unknown";
}

std::optional<Technology> parse_technology(std::string_view name) {
  for (auto t : {Technology::Synchronous, Technology::InverterVre, Technology::InverterStorage,
                 Technology::DemandSide}) {
    if (to_string(t) == name) return t;
  }
  return std::nullopt;
}

std::string_view to_string(MarketMode m) { return m == MarketMode::NemLike ? "NEM" : "WEM"; }

std::optional<MarketMode> parse_market_mode(std::string_view name) {
  if (name == "NEM") return MarketMode::NemLike;
  if (name == "WEM") return MarketMode::WemLike;
  return std::nullopt;
}

int interval_minutes(MarketMode m) { return m == MarketMode::NemLike ? 5 : 30; }

double Facility::available_mw(std::size_t interval) const {
  if (availability.empty()) return p_max;
  if (interval >= availability.size()) {
    throw Error(ErrorCode::MismatchedInterval, "facility '" + id + "' has no availability for interval " +
                                                   std::to_string(interval));
  }
  return std::min(p_max, availability[interval]);
}

const Facility& Registry::facility(std::string_view id) const {
  auto it = facilities_.find(id);
  if (it == facilities_.end()) throw Error(ErrorCode::UnknownFacility, "facility '" + std::string(id) + "'");
  return it->second;
}

std::vector<const ServiceOffer*> Registry::offers_for(std::size_t interval) const {
  std::vector<const ServiceOffer*> out;
  for (const auto& o : offers_) {
    if (o.applies_to(interval)) out.push_back(&o);
  }
  return out;
}

Registry validate_and_build_registry(std::vector<Facility> facilities, std::vector<ServiceOffer> offers,
                                     const MarketConfig& config) {
  if (!(config.price_floor < config.price_cap))
    violation("market config", "price_floor must be below price_cap");
  if (config.interval_minutes <= 0) violation("market config", "interval_minutes must be > 0");

  Registry reg;
  reg.config_ = config;
  for (auto& f : facilities) {
    check_facility(f);
    std::string id = f.id;
    if (!reg.facilities_.emplace(id, std::move(f)).second)
      throw Error(ErrorCode::DuplicateFacilityId, "facility '" + id + "'");
  }

  for (const auto& o : offers) {
    auto it = reg.facilities_.find(o.facility_id);
    if (it == reg.facilities_.end())
      throw Error(ErrorCode::UnknownFacilityInOffer,
                  "offer for " + std::string(to_string(o.service)) + " references '" + o.facility_id + "'");
    const Facility& f = it->second;
    const std::string where = "offer " + o.facility_id + "/" + std::string(to_string(o.service));
    if (!std::isfinite(o.price) || o.price < config.price_floor || o.price > config.price_cap) {
      throw Error(ErrorCode::PriceOutOfBounds, where + " price " + fmt_num(o.price) + " outside [" +
                                                   fmt_num(config.price_floor) + ", " +
                                                   fmt_num(config.price_cap) + "]");
    }
    if (!std::isfinite(o.quantity) || o.quantity < 0) violation(where, "quantity must be finite and >= 0");
    if (o.service == ServiceKind::RocofControl) {
      if (!(f.virtual_inertia_mws > 0)) violation(where, "RocofControl offers require virtual inertia");
      if (o.quantity > f.virtual_inertia_mws) violation(where, "quantity exceeds virtual_inertia_mws");
    } else if (o.quantity > f.p_max) {
      violation(where, "quantity " + fmt_num(o.quantity) + " exceeds p_max " + fmt_num(f.p_max));
    }
  }

  std::sort(offers.begin(), offers.end(), [](const ServiceOffer& a, const ServiceOffer& b) {
    auto key = [](const ServiceOffer& o) {
      return std::tuple<const std::string&, std::size_t, bool, std::size_t, double, double>(
          o.facility_id, index_of(o.service), o.interval.has_value(), o.interval.value_or(0), o.price, o.quantity);
    };
    return key(a) < key(b);
  });
  reg.offers_ = std::move(offers);
  return reg;
}

double total_system_inertia(const Registry& registry, const std::set<std::string>& committed) {
  double total = 0.0;
  for (const auto& id : committed) {
    const Facility& f = registry.facility(id);
    if (f.is_synchronous()) total += f.kinetic_energy_mws();
    total += f.virtual_inertia_mws;
  }
  return total;
}

}  // namespace ess
