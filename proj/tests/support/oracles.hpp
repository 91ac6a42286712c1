#pragma once

// Independent reference computations used only by tests. Nothing here calls
// into the library's solver or integrator.

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

namespace ess::testing {

// Exhaustive 1 MW grid search for a tiny clearing problem: up to three
// facilities, energy plus one ancillary service.
struct GridFacility {
  int capacity = 0;
  int energy_qty = 0;
  double energy_price = 0.0;
  int service_qty = 0;  // 0: no service offer
  double service_price = 0.0;
};

struct GridInstance {
  std::vector<GridFacility> facilities;
  int demand = 0;
  int requirement = 0;
  bool lower_service = false;  // false: raise service sharing headroom with energy
};

struct GridOptimum {
  double cost = 0.0;
  std::vector<int> energy;
  std::vector<int> service;
};

inline std::optional<GridOptimum> brute_force_clear(const GridInstance& in) {
  const std::size_t n = in.facilities.size();
  std::vector<int> e(3, 0), s(3, 0);
  std::vector<int> eq(3, 0), sq(3, 0), cap(3, 0);
  std::vector<double> ep(3, 0.0), sp(3, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    eq[i] = in.facilities[i].energy_qty;
    sq[i] = in.facilities[i].service_qty;
    cap[i] = in.facilities[i].capacity;
    ep[i] = in.facilities[i].energy_price;
    sp[i] = in.facilities[i].service_price;
  }
  auto ok = [&](int i) {
    if (e[i] > eq[i] || s[i] > sq[i]) return false;
    if (in.lower_service) return e[i] <= cap[i] && e[i] - s[i] >= 0;
    return e[i] + s[i] <= cap[i];
  };
  std::optional<GridOptimum> best;
  for (e[0] = 0; e[0] <= eq[0]; ++e[0])
    for (e[1] = 0; e[1] <= eq[1]; ++e[1]) {
      e[2] = in.demand - e[0] - e[1];
      if (e[2] < 0 || e[2] > eq[2]) continue;
      for (s[0] = 0; s[0] <= sq[0]; ++s[0]) {
        if (!ok(0)) continue;
        for (s[1] = 0; s[1] <= sq[1]; ++s[1]) {
          if (!ok(1)) continue;
          for (s[2] = 0; s[2] <= sq[2]; ++s[2]) {
            if (!ok(2) || s[0] + s[1] + s[2] < in.requirement) continue;
            double cost = 0.0;
            for (int i = 0; i < 3; ++i) cost += ep[i] * e[i] + sp[i] * s[i];
            if (!best || cost < best->cost) best = GridOptimum{cost, {e[0], e[1], e[2]}, {s[0], s[1], s[2]}};
          }
        }
      }
    }
  if (best) {
    best->energy.resize(n);
    best->service.resize(n);
  }
  return best;
}

// Zero-damping swing equation with one exponential responder R(1 - e^{-t/tau})
// integrated analytically:
//   df(t) = f0 / (2E) * [ (R - dP) t - R tau (1 - e^{-t/tau}) ]
// The nadir is at t* = -tau ln(1 - dP / R) (requires R > dP).
struct ClosedFormNadir {
  double time = 0.0;
  double frequency = 0.0;
};

inline ClosedFormNadir closed_form_nadir(double inertia, double dp, double r, double tau, double f0) {
  const double t = -tau * std::log(1.0 - dp / r);
  const double df = f0 / (2.0 * inertia) * ((r - dp) * t - r * tau * (1.0 - std::exp(-t / tau)));
  return {t, f0 + df};
}

// Empirical survival function and quantile computed by direct counting.
inline double count_exceeding(const std::vector<double>& xs, double r) {
  std::size_t n = 0;
  for (double x : xs) n += x > r ? 1 : 0;
  return static_cast<double>(n) / static_cast<double>(xs.size());
}

}  // namespace ess::testing
