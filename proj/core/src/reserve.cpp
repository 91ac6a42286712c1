#include "ess/reserve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ess/error.hpp"

namespace ess {

void validate(const ErrorSampleSet& set) {
  if (set.samples.empty()) throw Error(ErrorCode::InvariantViolation, "error sample set is empty");
  for (std::size_t i = 0; i < set.samples.size(); ++i) {
    if (!std::isfinite(set.samples[i]))
      throw Error(ErrorCode::InvariantViolation, "error sample " + std::to_string(i) + " is not finite");
  }
  if (set.horizon_minutes <= 0) throw Error(ErrorCode::InvariantViolation, "horizon must be > 0 minutes");
}

double exceedance_probability(const ErrorSampleSet& set, double reserve_mw) {
  if (set.samples.empty()) return 0.0;
  const auto n = std::count_if(set.samples.begin(), set.samples.end(), [&](double s) { return s > reserve_mw; });
  return static_cast<double>(n) / static_cast<double>(set.samples.size());
}

namespace {

std::vector<double> sorted_positive(const ErrorSampleSet& set) {
  std::vector<double> pos;
  std::copy_if(set.samples.begin(), set.samples.end(), std::back_inserter(pos), [](double s) { return s > 0; });
  std::sort(pos.begin(), pos.end());
  return pos;
}

}  // namespace

ReserveDemandCurve build_demand_curve(const ErrorSampleSet& set, double price_cap, int n_steps) {
  validate(set);
  if (n_steps < 2) throw Error(ErrorCode::InvariantViolation, "n_steps must be >= 2");
  if (!(price_cap > 0)) throw Error(ErrorCode::InvariantViolation, "price_cap must be > 0");

  ReserveDemandCurve curve;
  const std::vector<double> pos = sorted_positive(set);
  if (pos.empty()) return curve;

  const auto m = static_cast<double>(pos.size());
  for (int k = 1; k <= n_steps; ++k) {
    // Inverse empirical CDF at probability k / n_steps.
    const double idx = std::ceil(m * k / n_steps - 1e-12);
    const double r = pos[static_cast<std::size_t>(std::clamp(idx, 1.0, m)) - 1];
    if (!curve.breakpoints.empty() && curve.breakpoints.back().reserve_mw >= r) continue;
    curve.breakpoints.push_back({r, price_cap * exceedance_probability(set, r)});
  }
  return curve;
}

double requirement_at_confidence(const ErrorSampleSet& set, double confidence) {
  validate(set);
  if (!(confidence > 0 && confidence < 1))
    throw Error(ErrorCode::InvariantViolation, "confidence must lie in (0, 1)");
  const double target = 1.0 - confidence;
  for (double r : sorted_positive(set)) {
    if (exceedance_probability(set, r) <= target) return r;
  }
  return 0.0;
}

std::string_view to_string(ReserveProduct p) {
  switch (p) {
    case ReserveProduct::FirmAvailability30: return "FirmAvailability30";
    case ReserveProduct::CallableSpinning: return "CallableSpinning";
    case ReserveProduct::Headroom5: return "Headroom5";
  }
  return "Unknown";
}

std::optional<ReserveProduct> parse_reserve_product(std::string_view name) {
  for (auto p : {ReserveProduct::FirmAvailability30, ReserveProduct::CallableSpinning, ReserveProduct::Headroom5}) {
    if (to_string(p) == name) return p;
  }
  return std::nullopt;
}

int required_horizon_minutes(ReserveProduct p) { return p == ReserveProduct::Headroom5 ? 5 : 30; }

ServiceRequirement reserve_product(ReserveProduct product, const ErrorSampleSet& set,
                                   const ReserveProductConfig& config) {
  if (set.horizon_minutes != required_horizon_minutes(product)) {
    throw Error(ErrorCode::HorizonMismatch, std::string(to_string(product)) + " needs " +
                                                std::to_string(required_horizon_minutes(product)) +
                                                "-minute samples, got " + std::to_string(set.horizon_minutes));
  }
  ServiceRequirement req;
  req.service = ServiceKind::OperatingReserve;
  if (product == ReserveProduct::CallableSpinning) {
    req.mode = FixedQuantity{requirement_at_confidence(set, config.confidence)};
    return req;
  }
  ReserveDemandCurve curve = build_demand_curve(set, config.price_cap, config.n_steps);
  if (curve.empty())
    req.mode = Disabled{};
  else
    req.mode = DemandCurveMode{std::move(curve)};
  return req;
}

}  // namespace ess
