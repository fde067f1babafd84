#pragma once

#include <span>

#include "fcfs/analytic.hpp"

namespace fcfs {

/// Distance (in sequence positions) between first appearances of
/// consecutive unmatched agent types is geometric on {1, 2, ...}.
struct GeometricStage {
  double p = 0.0;

  double mean() const { return 1.0 / p; }
  double variance() const { return (1.0 - p) / (p * p); }
  double pgf(double z) const { return z * p / (1.0 - z * (1.0 - p)); }
};

/// p = (mu_S(prefix) - lambda_prefix) / (lambda_bar + mu_bar). Throws
/// UnstableModel when p <= 0, DuplicateType / UnknownIdentifier on a bad
/// prefix.
GeometricStage geometric_stage(const MatchingModel& model, std::span<const int> prefix);

/// Per-pair and per-agent delay and waiting-time moments.
DelayReport delay_moments(const MatchingModel& model, const EnumerationOptions& options = {});

/// Identical report; the waiting-time fields are the Poisson-arrival analogue.
inline DelayReport wait_moments(const MatchingModel& model, const EnumerationOptions& options = {}) {
  return delay_moments(model, options);
}

/// E[z^L] for the (good, agent) delay, 0 <= z <= 1.
double delay_pgf(const MatchingModel& model, int good, int agent, double z, const EnumerationOptions& options = {});

/// E[exp(s W)] for the (good, agent) wait; s must lie below every stage
/// rate mu_S(C) - lambda_C over agent subsets C containing the agent.
double wait_mgf(const MatchingModel& model, int good, int agent, double s, const EnumerationOptions& options = {});

/// Smallest stage rate mu_S(C) - lambda_C over subsets C containing `agent`.
double min_stage_rate(const MatchingModel& model, int agent);

}  // namespace fcfs
