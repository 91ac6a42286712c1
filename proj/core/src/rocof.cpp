#include "ess/rocof.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ess/error.hpp"

namespace ess {

double min_inertia_for_rocof(double contingency_mw, double max_rocof, double f0) {
  if (!(max_rocof > 0)) throw Error(ErrorCode::NonPositiveLimit, "max_rocof " + std::to_string(max_rocof) + " Hz/s");
  return contingency_mw * f0 / (2.0 * max_rocof);
}

double legacy_headroom_requirement(double largest_contingency_mw) {
  // 0.7 has no exact binary form; x * 7 / 10 in extended precision rounds once.
  return static_cast<double>(static_cast<long double>(largest_contingency_mw) * 7 / 10);
}

void validate(const ResponseTrace& trace) {
  const auto& s = trace.samples;
  if (s.size() < 5) throw Error(ErrorCode::InvalidTrace, "need at least 5 samples, got " + std::to_string(s.size()));
  if (s.front().t_s != 0.0) throw Error(ErrorCode::InvalidTrace, "first sample must be at t = 0");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!std::isfinite(s[i].t_s) || !std::isfinite(s[i].output_mw))
      throw Error(ErrorCode::InvalidTrace, "sample " + std::to_string(i) + " is not finite");
    if (i > 0 && s[i].t_s < s[i - 1].t_s)
      throw Error(ErrorCode::InvalidTrace, "time decreases at sample " + std::to_string(i));
  }
}

namespace {

struct TauEval {
  double r_max;
  double sse;
};

// For fixed tau the model is linear in r_max.
TauEval evaluate(const std::vector<ResponseSample>& s, double tau) {
  double gy = 0.0, gg = 0.0;
  for (const auto& p : s) {
    const double g = -std::expm1(-p.t_s / tau);
    gy += g * p.output_mw;
    gg += g * g;
  }
  const double r = gg > 0 ? gy / gg : 0.0;
  double sse = 0.0;
  for (const auto& p : s) {
    const double e = p.output_mw - r * -std::expm1(-p.t_s / tau);
    sse += e * e;
  }
  return {r, sse};
}

}  // namespace

ExponentialFit fit_exponential(const ResponseTrace& trace) {
  validate(trace);
  const auto& s = trace.samples;
  if (std::all_of(s.begin(), s.end(), [](const ResponseSample& p) { return p.output_mw == 0.0; }))
    throw Error(ErrorCode::DegenerateTrace, "all outputs are zero");
  if (!(s.back().output_mw > 0))
    throw Error(ErrorCode::DegenerateTrace, "final output must be positive");

  // Golden section on log(tau).
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(kFitTauMin), b = std::log(kFitTauMax);
  double c = b - inv_phi * (b - a), d = a + inv_phi * (b - a);
  double fc = evaluate(s, std::exp(c)).sse, fd = evaluate(s, std::exp(d)).sse;
  int iter = 0;
  while (b - a > 1e-12) {
    if (++iter > 500) throw Error(ErrorCode::NoConvergence, "golden-section search did not converge");
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = evaluate(s, std::exp(c)).sse;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = evaluate(s, std::exp(d)).sse;
    }
  }
  const double tau = std::exp((a + b) / 2);
  const TauEval best = evaluate(s, tau);
  if (!std::isfinite(best.sse) || !std::isfinite(best.r_max))
    throw Error(ErrorCode::NoConvergence, "non-finite residual");

  ExponentialFit fit;
  fit.tau = tau;
  fit.r_max = best.r_max;
  fit.rmse = std::sqrt(best.sse / static_cast<double>(s.size()));
  fit.saturated = tau <= kFitTauMin * (1 + 1e-6) || tau >= kFitTauMax * (1 - 1e-6);
  return fit;
}

double speed_multiplier(const ExponentialFit& fit, double tau_reference, double m_max) {
  return std::clamp(tau_reference / fit.tau, 0.0, m_max);
}

double accredited_quantity(const Facility& facility, const ExponentialFit& fit, double multiplier,
                           double current_output_mw) {
  const double headroom = std::max(0.0, facility.p_max - current_output_mw);
  return std::max(0.0, std::min(fit.r_max, headroom)) * multiplier;
}

}  // namespace ess
