#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ess {

// Service catalog. Contingency services follow the 6 s / 60 s / 5 min raise and
// lower markets; FFR responds faster than the 6 s service.
enum class ServiceKind {
  Energy,
  RegulationRaise,
  RegulationLower,
  ContingencyRaiseFast,
  ContingencyRaiseSlow,
  ContingencyRaiseDelayed,
  ContingencyLowerFast,
  ContingencyLowerSlow,
  ContingencyLowerDelayed,
  FastFrequencyResponse,
  RocofControl,
  OperatingReserve,
};

inline constexpr std::size_t kServiceCount = 12;

inline constexpr std::array<ServiceKind, kServiceCount> kAllServices = {
    ServiceKind::Energy,
    ServiceKind::RegulationRaise,
    ServiceKind::RegulationLower,
    ServiceKind::ContingencyRaiseFast,
    ServiceKind::ContingencyRaiseSlow,
    ServiceKind::ContingencyRaiseDelayed,
    ServiceKind::ContingencyLowerFast,
    ServiceKind::ContingencyLowerSlow,
    ServiceKind::ContingencyLowerDelayed,
    ServiceKind::FastFrequencyResponse,
    ServiceKind::RocofControl,
    ServiceKind::OperatingReserve,
};

enum class Direction { None, Raise, Lower };

constexpr std::size_t index_of(ServiceKind s) { return static_cast<std::size_t>(s); }

std::string_view to_string(ServiceKind s);
std::optional<ServiceKind> parse_service(std::string_view name);
/// Comma separated list of every service name, for error messages.
std::string service_names();

/// Raise services consume headroom above energy dispatch; lower services consume
/// footroom below it. Energy and RocofControl have no direction.
Direction direction(ServiceKind s);

/// Nominal full-response time in seconds; nullopt for services without one
/// (energy, regulation, RocofControl, operating reserve).
std::optional<double> response_time_s(ServiceKind s);

using ServiceArray = std::array<double, kServiceCount>;

enum class Technology { Synchronous, InverterVre, InverterStorage, DemandSide };

std::string_view to_string(Technology t);
std::optional<Technology> parse_technology(std::string_view name);

enum class MarketMode { NemLike, WemLike };

std::string_view to_string(MarketMode m);
std::optional<MarketMode> parse_market_mode(std::string_view name);
/// 5 for NEM-like, 30 for WEM-like.
int interval_minutes(MarketMode m);

struct Facility {
  std::string id;
  Technology tech = Technology::Synchronous;
  double p_max = 0.0;                 // MW
  double p_min = 0.0;                 // MW, synchronous only
  double inertia_h = 0.0;             // s
  double mva_rating = 0.0;            // MVA
  double virtual_inertia_mws = 0.0;   // MW.s
  std::optional<double> droop;        // per unit
  double pfr_tau = 2.0;               // s
  double commitment_cost = 0.0;       // $ per interval
  std::vector<double> availability;   // MW per interval; empty means p_max throughout

  /// Physical stored energy H * S in MW.s (zero for non-synchronous plant).
  double kinetic_energy_mws() const { return inertia_h * mva_rating; }

  /// min(p_max, availability[interval]).
  double available_mw(std::size_t interval) const;

  bool is_synchronous() const { return tech == Technology::Synchronous; }
  bool is_non_synchronous_generation() const {
    return tech == Technology::InverterVre || tech == Technology::InverterStorage;
  }
};

/// One price-quantity band. Multi-band books are several offers.
struct ServiceOffer {
  std::string facility_id;
  ServiceKind service = ServiceKind::Energy;
  double quantity = 0.0;  // MW (MW.s for RocofControl)
  double price = 0.0;     // $/MWh for energy, $/MW/h otherwise
  /// Interval the band applies to; nullopt for a standing offer valid in every interval.
  std::optional<std::size_t> interval;

  bool applies_to(std::size_t i) const { return !interval || *interval == i; }
};

struct MarketConfig {
  double price_floor = -1000.0;  // $/MWh
  double price_cap = 15000.0;    // $/MWh, also the scarcity price for services
  int interval_minutes = 5;

  double interval_hours() const { return interval_minutes / 60.0; }
};

/// Immutable, validated set of facilities and offers. Facilities iterate in id order.
class Registry {
 public:
  Registry() = default;

  const std::map<std::string, Facility, std::less<>>& facilities() const { return facilities_; }
  /// All offers, sorted by (facility, service, interval, price, quantity).
  std::span<const ServiceOffer> offers() const { return offers_; }
  const MarketConfig& config() const { return config_; }

  std::size_t size() const { return facilities_.size(); }
  bool contains(std::string_view id) const { return facilities_.find(id) != facilities_.end(); }
  /// Throws Error(UnknownFacility).
  const Facility& facility(std::string_view id) const;

  /// Offers valid in `interval`, in registry order.
  std::vector<const ServiceOffer*> offers_for(std::size_t interval) const;

  friend Registry validate_and_build_registry(std::vector<Facility> facilities,
                                              std::vector<ServiceOffer> offers,
                                              const MarketConfig& config);

 private:
  std::map<std::string, Facility, std::less<>> facilities_;
  std::vector<ServiceOffer> offers_;
  MarketConfig config_;
};

/// Validates every facility and offer invariant. Throws ess::Error with
/// DuplicateFacilityId, UnknownFacilityInOffer, PriceOutOfBounds or InvariantViolation.
Registry validate_and_build_registry(std::vector<Facility> facilities, std::vector<ServiceOffer> offers,
                                     const MarketConfig& config);

/// Sum of H * S over committed synchronous units plus the virtual inertia credit
/// of every committed facility that has one, in MW.s.
double total_system_inertia(const Registry& registry, const std::set<std::string>& committed);

}  // namespace ess
