#pragma once

#include <vector>

#include "ess/model.hpp"

namespace ess {

/// Inertia needed to hold the initial ROCOF at `max_rocof` after losing
/// `contingency_mw`: contingency * f0 / (2 * max_rocof). Throws Error(NonPositiveLimit).
double min_inertia_for_rocof(double contingency_mw, double max_rocof, double f0);

/// Legacy WEM rule of thumb: headroom equal to 70% of the largest generation contingency.
double legacy_headroom_requirement(double largest_contingency_mw);

struct ResponseSample {
  double t_s = 0.0;
  double output_mw = 0.0;
};

/// Measured response of a facility after a frequency event. Requires at least
/// five samples, t starting at 0 and non-decreasing, finite outputs.
struct ResponseTrace {
  std::vector<ResponseSample> samples;
};

/// Throws Error(InvalidTrace) describing the first violated condition.
void validate(const ResponseTrace& trace);

/// Best perfect-exponential reference r_max * (1 - exp(-t / tau)).
struct ExponentialFit {
  double r_max = 0.0;  // MW
  double tau = 1.0;    // s
  double rmse = 0.0;   // MW
  /// tau ended on a bracket end; the true optimum may lie outside [0.01, 60] s.
  bool saturated = false;
};

inline constexpr double kFitTauMin = 0.01;
inline constexpr double kFitTauMax = 60.0;

/// Least-squares fit of the exponential reference: golden-section search over
/// tau with r_max solved in closed form for each candidate.
ExponentialFit fit_exponential(const ResponseTrace& trace);

inline constexpr double kDefaultTauReference = 6.0;
inline constexpr double kDefaultMaxMultiplier = 5.0;

/// clamp(tau_reference / fit.tau, 0, m_max).
double speed_multiplier(const ExponentialFit& fit, double tau_reference = kDefaultTauReference,
                        double m_max = kDefaultMaxMultiplier);

/// min(fit.r_max, headroom) * multiplier with headroom = p_max - current_output_mw.
double accredited_quantity(const Facility& facility, const ExponentialFit& fit, double multiplier,
                           double current_output_mw = 0.0);

}  // namespace ess
