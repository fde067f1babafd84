#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "fcfs/analytic.hpp"

namespace fcfs {

/// Light-traffic limit of r_{s_j,c_i}: alpha_i * mu_j / mu_S(c_i) on edges, 0
/// elsewhere. Indexed [good][agent].
Grid light_traffic_rates(const MatchingModel& model);

/// Light-traffic limit of theta_{c_i}(s_j) = mu_j / mu_S(c_i). Indexed
/// [agent][good].
Grid light_traffic_theta(const MatchingModel& model);

/// `steps` evenly spaced points from lo to hi inclusive (lo alone when
/// steps == 1). Throws DomainError unless 0 < lo <= hi < 1 and steps >= 1.
std::vector<double> linear_grid(double lo, double hi, int steps);

struct SweepPoint {
  double rho = 0.0;
  RateReport rates;
  DelayReport delays;
};

struct SweepSeries {
  std::vector<SweepPoint> points;
};

/// Re-evaluates the model at lambda_bar = rho * mu_bar for every grid point.
/// Throws DomainError for a grid that is not strictly increasing in (0, 1),
/// UnstableGridPoint naming the first unstable rho.
SweepSeries sweep(const MatchingModel& model, const std::vector<double>& rho_grid,
                  const EnumerationOptions& options = {});

/// M/M/1 mean time in system 1 / (mu - lambda); empty when lambda >= mu.
std::optional<double> mm1_wait(double lambda, double mu);

struct DedicatedPair {
  int good = 0;
  int agent = 0;
  /// Empty when lambda_{c_i} >= mu_{s_j}.
  std::optional<double> wait;
  bool stable() const { return wait.has_value(); }
};

/// Wait per pair if each listed good type served only its paired agent type.
/// Throws DomainError for a non-edge or a type used twice.
std::vector<DedicatedPair> dedicated_baseline(const MatchingModel& model,
                                              const std::vector<std::pair<int, int>>& pairing);

}  // namespace fcfs
