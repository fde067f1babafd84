#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace fcfs {

using Grid = std::vector<std::vector<double>>;

/// Long-run outcome fractions of arriving goods.
///
/// All tables are indexed [good][agent] except theta, which is
/// [agent][good]. Entries for pairs outside the compatibility graph are 0.
struct RateReport {
  std::vector<std::string> goods;
  std::vector<std::string> agents;
  std::vector<std::vector<bool>> edge;

  /// Normalizing constant: stationary probability of no unmatched agents.
  double b = 0.0;
  /// r_{s_j,c_i}: fraction of all goods that are of type s_j and match c_i.
  Grid rate;
  /// r_{s_j,0}: fraction of all goods that are of type s_j and are lost.
  std::vector<double> loss;
  /// Outcome distribution of an s_j good: eta[j][i] matched to c_i ...
  Grid eta;
  /// ... and eta_lost[j] lost.
  std::vector<double> eta_lost;
  /// theta[i][j]: fraction of c_i agents matched by an s_j good.
  Grid theta;

  int good_count() const { return static_cast<int>(goods.size()); }
  int agent_count() const { return static_cast<int>(agents.size()); }
  double total_loss() const;
  double total_matched() const;
};

struct Moments {
  double mean = 0.0;
  double variance = 0.0;

  double stddev() const { return std::sqrt(variance); }
};

using MomentGrid = std::vector<std::vector<std::optional<Moments>>>;

/// Delay (sequence positions) and waiting-time (Poisson clock) moments.
/// Pairs outside the graph, or with zero matching rate, are absent.
struct DelayReport {
  std::vector<std::string> goods;
  std::vector<std::string> agents;

  MomentGrid pair_delay;  // [good][agent]
  std::vector<std::optional<Moments>> agent_delay;
  MomentGrid pair_wait;   // [good][agent]
  std::vector<std::optional<Moments>> agent_wait;
};

}  // namespace fcfs
