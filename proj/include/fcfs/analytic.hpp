#pragma once

#include <span>
#include <vector>

#include "fcfs/compensated.hpp"
#include "fcfs/enumerate.hpp"
#include "fcfs/model.hpp"
#include "fcfs/reports.hpp"

namespace fcfs {

/// Per-pair sums over all terms in which s_j's first compatible agent type
/// is c_i, each weighted by the term weight X.
struct PairSums {
  CompensatedSum weight;        // X
  CompensatedSum delay_mean;    // X * sum_h 1/p_h
  CompensatedSum delay_mean_sq; // X * (sum_h 1/p_h)^2
  CompensatedSum delay_var;     // X * sum_h (1-p_h)/p_h^2
  CompensatedSum wait_mean;     // X * sum_h 1/theta_h
  CompensatedSum wait_mean_sq;  // X * (sum_h 1/theta_h)^2
  CompensatedSum wait_var;      // X * sum_h 1/theta_h^2

  void merge(const PairSums& other);
};

/// Accumulator for the single pass that yields B, the matching rates and the
/// delay/wait moments. Stage h of a term is geometric with success
/// probability p_h = gap_h / (lambda_bar + mu_bar) in sequence positions, or
/// exponential with rate theta_h = gap_h in time.
class MomentAccumulator {
 public:
  MomentAccumulator(int n_goods, int n_agents, double total_rate);

  void visit(const PermutationTerm& term);
  void merge(const MomentAccumulator& other);

  /// Sum of X over all nonempty terms.
  double weight_total() const { return weight_total_.value(); }
  const PairSums& pair(int good, int agent) const { return pairs_[good * n_agents_ + agent]; }
  int good_count() const { return n_goods_; }
  int agent_count() const { return n_agents_; }

 private:
  int n_goods_;
  int n_agents_;
  double total_rate_;
  CompensatedSum weight_total_;
  std::vector<PairSums> pairs_;
};

struct AnalyticResult {
  RateReport rates;
  DelayReport delays;
};

/// B = (1 + sum over ordered nonempty subsets of the term weight)^-1.
double normalizing_constant(const MatchingModel& model, const EnumerationOptions& options = {});

/// Stationary probability that the unmatched agent types, in order of first
/// appearance, are exactly `order`.
double pi_y_perm(const MatchingModel& model, std::span<const int> order, const EnumerationOptions& options = {});
double pi_y_perm(const MatchingModel& model, std::span<const std::string> order, const EnumerationOptions& options = {});
struct OrderProbability {
  std::vector<int> order;
  double probability = 0.0;
};

/// Every first-appearance order whose stationary probability is at least
/// `min_probability`, in depth-first order. Two enumeration passes.
std::vector<OrderProbability> pi_y_table(const MatchingModel& model, double min_probability,
                                         const EnumerationOptions& options = {});

/// Same, with B already known.
double pi_y_perm_given_b(const MatchingModel& model, std::span<const int> order, double b);

/// Rates and delay/wait moments from one enumeration pass.
AnalyticResult analyze(const MatchingModel& model, const EnumerationOptions& options = {});

RateReport matching_rates(const MatchingModel& model, const EnumerationOptions& options = {});

/// Turns raw pass sums into reports; exposed for the reference implementation
/// and for tests.
AnalyticResult finalize(const MatchingModel& model, const MomentAccumulator& sums);

}  // namespace fcfs
