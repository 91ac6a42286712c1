#pragma once

#include <vector>

namespace ess {

struct CurveBreakpoint {
  double reserve_mw = 0.0;
  double price = 0.0;  // $/MW/h

  bool operator==(const CurveBreakpoint&) const = default;
};

/// Piecewise reserve demand curve. reserve_mw strictly increasing, price
/// non-increasing and within [0, price_cap]. An empty curve demands nothing.
///
/// When cleared, the MW between consecutive breakpoints (r_{k-1}, r_k], with
/// r_{-1} = 0, are valued at the price of breakpoint k.
struct ReserveDemandCurve {
  std::vector<CurveBreakpoint> breakpoints;

  bool empty() const { return breakpoints.empty(); }
  bool operator==(const ReserveDemandCurve&) const = default;
};

}  // namespace ess
