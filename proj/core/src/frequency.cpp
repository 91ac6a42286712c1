#include "ess/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ess/error.hpp"

namespace ess {

void validate(const FrequencyLimits& l) {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::InvariantViolation, "frequency limits: " + what); };
  if (!(l.f0 > 0)) bad("f0 must be > 0");
  if (!(l.max_rocof > 0)) bad("max_rocof must be > 0");
  if (!(l.min_nadir < l.f0)) bad("min_nadir must be below f0");
  if (!(l.settling_low <= l.settling_high)) bad("settling band is inverted");
  if (l.settling_low < l.min_nadir) bad("settling band lower bound must be >= min_nadir");
}

double Responder::output_mw(double t) const {
  if (t < delay_s || capacity_mw <= 0) return 0.0;
  if (tau_s <= 0) return capacity_mw;
  return capacity_mw * -std::expm1(-(t - delay_s) / tau_s);
}

double rocof_after_contingency(double inertia_mws, double contingency_mw, double f0) {
  if (contingency_mw == 0.0) return 0.0;
  if (!(inertia_mws > 0)) {
    throw Error(ErrorCode::ZeroInertiaWithContingency,
                "contingency of " + std::to_string(contingency_mw) + " MW with no inertia");
  }
  return std::abs(contingency_mw) * f0 / (2.0 * inertia_mws);
}

FrequencyTrace simulate_contingency(double inertia_mws, double contingency_mw, const std::vector<Responder>& responders,
                                    const FrequencyLimits& limits, const SimulationSettings& s) {
  if (!(inertia_mws > 0)) throw Error(ErrorCode::NonPositiveInertia, "inertia " + std::to_string(inertia_mws) + " MW.s");
  if (!(s.dt_s > 0) || s.dt_s > 0.01 || !(s.horizon_s >= 30.0)) {
    throw Error(ErrorCode::InvalidStep, "dt must lie in (0, 0.01] s and horizon be >= 30 s (got dt=" +
                                            std::to_string(s.dt_s) + ", horizon=" + std::to_string(s.horizon_s) + ")");
  }
  for (const auto& r : responders) {
    if (!(r.capacity_mw >= 0) || r.tau_s < 0 || r.delay_s < 0)
      throw Error(ErrorCode::InvariantViolation, "responder parameters must be non-negative");
  }

  const double f0 = limits.f0;
  const double dp = contingency_mw;
  const double gain = f0 / (2.0 * inertia_mws);
  const double damping = s.load_damping_mw_per_hz;

  auto deriv = [&](double t, double df) {
    double resp = 0.0;
    for (const auto& r : responders) resp += r.output_mw(t);
    resp = std::min(resp, std::max(dp, 0.0));
    return gain * (-dp + resp - damping * df);
  };

  const auto steps = static_cast<std::size_t>(std::llround(s.horizon_s / s.dt_s));
  FrequencyTrace tr;
  tr.time_s.resize(steps + 1);
  tr.frequency_hz.resize(steps + 1);
  double df = 0.0;
  tr.time_s[0] = 0.0;
  tr.frequency_hz[0] = f0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * s.dt_s;
    const double h = s.dt_s;
    const double k1 = deriv(t, df);
    const double k2 = deriv(t + h / 2, df + h / 2 * k1);
    const double k3 = deriv(t + h / 2, df + h / 2 * k2);
    const double k4 = deriv(t + h, df + h * k3);
    df += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    tr.time_s[k + 1] = static_cast<double>(k + 1) * s.dt_s;
    tr.frequency_hz[k + 1] = f0 + df;
  }

  tr.rocof_initial = steps > 0 ? std::abs(tr.frequency_hz[1] - tr.frequency_hz[0]) / s.dt_s : 0.0;
  const auto it = std::min_element(tr.frequency_hz.begin(), tr.frequency_hz.end());
  tr.nadir = *it;
  tr.nadir_time = tr.time_s[static_cast<std::size_t>(it - tr.frequency_hz.begin())];
  const std::size_t tail = std::max<std::size_t>(1, (steps + 1) / 10);
  tr.settling_frequency =
      std::accumulate(tr.frequency_hz.end() - static_cast<std::ptrdiff_t>(tail), tr.frequency_hz.end(), 0.0) /
      static_cast<double>(tail);
  return tr;
}

SecurityVerdict check_limits(const FrequencyTrace& trace, const FrequencyLimits& limits) {
  SecurityVerdict v;
  v.rocof_ok = std::abs(trace.rocof_initial) <= limits.max_rocof;
  v.nadir_ok = trace.nadir >= limits.min_nadir;
  v.settling_ok = trace.settling_frequency >= limits.settling_low && trace.settling_frequency <= limits.settling_high;
  v.overall = v.rocof_ok && v.nadir_ok && v.settling_ok;
  return v;
}

}  // namespace ess
