#pragma once

#include <vector>

#include "ess/clearing.hpp"
#include "ess/demand_curve.hpp"

namespace ess {

/// Forecast errors (actual - forecast, MW) for one look-ahead horizon.
struct ErrorSampleSet {
  std::vector<double> samples;
  int horizon_minutes = 30;
};

/// Throws Error(InvariantViolation) if empty or non-finite.
void validate(const ErrorSampleSet& set);

/// Empirical survival function: share of samples strictly greater than r.
double exceedance_probability(const ErrorSampleSet& set, double reserve_mw);

/// Breakpoints at the n_steps empirical quantiles of the positive errors, priced
/// at price_cap * exceedance. Returns an empty curve when no error is positive.
ReserveDemandCurve build_demand_curve(const ErrorSampleSet& set, double price_cap, int n_steps);

/// Smallest positive error r with exceedance(r) <= 1 - confidence; 0 when no
/// error is positive (raise reserve is sized by shortfall errors only).
double requirement_at_confidence(const ErrorSampleSet& set, double confidence);

enum class ReserveProduct { FirmAvailability30, CallableSpinning, Headroom5 };

std::string_view to_string(ReserveProduct p);
std::optional<ReserveProduct> parse_reserve_product(std::string_view name);
/// Forecast horizon in minutes the product is sized against (30 or 5).
int required_horizon_minutes(ReserveProduct p);

struct ReserveProductConfig {
  double price_cap = 15000.0;
  int n_steps = 10;
  double confidence = 0.95;
};

/// OperatingReserve requirement for the chosen product variant. Throws
/// Error(HorizonMismatch) when the sample horizon does not suit the product.
ServiceRequirement reserve_product(ReserveProduct product, const ErrorSampleSet& set,
                                   const ReserveProductConfig& config);

}  // namespace ess
