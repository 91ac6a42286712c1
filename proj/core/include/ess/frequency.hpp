#pragma once

#include <vector>

namespace ess {

/// Post-contingency frequency limits. Values are scenario inputs.
struct FrequencyLimits {
  double f0 = 50.0;            // Hz
  double max_rocof = 1.0;      // Hz/s, magnitude
  double min_nadir = 49.0;     // Hz
  double settling_low = 49.5;  // Hz
  double settling_high = 50.5; // Hz
};

/// Throws Error(InvariantViolation) if the limits are inconsistent.
void validate(const FrequencyLimits& limits);

/// Aggregate response source. Output after the contingency is
/// capacity * (1 - exp(-(t - delay) / tau)) for t >= delay; tau == 0 gives a
/// step at t = delay.
struct Responder {
  double capacity_mw = 0.0;
  double tau_s = 1.0;
  double delay_s = 0.0;

  double output_mw(double t) const;
};

struct FrequencyTrace {
  std::vector<double> time_s;
  std::vector<double> frequency_hz;
  double rocof_initial = 0.0;  // Hz/s, magnitude over the first step
  double nadir = 0.0;          // Hz
  double nadir_time = 0.0;     // s
  double settling_frequency = 0.0;  // Hz, mean over the final 10% of the horizon
};

struct SecurityVerdict {
  bool rocof_ok = true;
  bool nadir_ok = true;
  bool settling_ok = true;
  bool overall = true;
};

/// Initial ROCOF magnitude delta_p * f0 / (2 * inertia). Throws
/// Error(ZeroInertiaWithContingency) when inertia is zero and delta_p > 0.
double rocof_after_contingency(double inertia_mws, double contingency_mw, double f0);

struct SimulationSettings {
  double load_damping_mw_per_hz = 0.0;
  double horizon_s = 60.0;
  double dt_s = 0.01;
};

/// Fixed-step RK4 integration of the aggregate swing equation
///   (2 E / f0) d(df)/dt = -dP + min(sum_i R_i(t), dP) - D * df
/// Responders are clipped at their capacity by construction and together never
/// inject more than the lost power.
FrequencyTrace simulate_contingency(double inertia_mws, double contingency_mw, const std::vector<Responder>& responders,
                                    const FrequencyLimits& limits, const SimulationSettings& settings);

SecurityVerdict check_limits(const FrequencyTrace& trace, const FrequencyLimits& limits);

}  // namespace ess
