#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "fcfs/model.hpp"

namespace fcfs::sim {

enum class Kind { Agent, Good };

struct Item {
  Kind kind = Kind::Agent;
  int type = 0;

  bool operator==(const Item&) const = default;
};

/// i.i.d. item stream: an agent with probability lambda_bar / (lambda_bar +
/// mu_bar), then its type from alpha (or beta for a good). Two draws per item,
/// kind first, from one mt19937_64 stream. Inter-arrival times come from a
/// second stream so the item sequence does not depend on whether times are
/// used.
class ItemSource {
 public:
  ItemSource(const MatchingModel& model, std::uint64_t seed);

  Item next();
  /// Exp(lambda_bar + mu_bar) gap before the next item.
  double next_gap();

 private:
  double uniform(std::mt19937_64& engine);
  static int pick(const std::vector<double>& cumulative, double u);

  std::mt19937_64 items_;
  std::mt19937_64 clock_;
  double p_agent_;
  double total_rate_;
  std::vector<double> alpha_cdf_;
  std::vector<double> beta_cdf_;
};

/// Unmatched agents, kept as one FIFO per type. The oldest agent of a set of
/// types is the queue front with the smallest index.
class UnmatchedList {
 public:
  struct Entry {
    int type = 0;
    std::int64_t index = 0;
    double time = 0.0;
  };

  explicit UnmatchedList(int n_types) : queues_(n_types) {}

  void push(int type, std::int64_t index, double time = 0.0);
  /// Type of the oldest unmatched agent among `types`, or -1.
  int oldest_in(TypeSet types) const;
  Entry pop(int type);

  bool empty() const { return size_ == 0; }
  std::size_t size() const { return size_; }
  int type_count() const { return static_cast<int>(queues_.size()); }
  const std::deque<Entry>& queue(int type) const { return queues_[type]; }

  /// All entries, oldest first.
  std::vector<Entry> ordered() const;
  /// Distinct types in order of first appearance (the Y-state projection).
  std::vector<int> first_appearance_order() const;

 private:
  std::vector<std::deque<Entry>> queues_;
  std::size_t size_ = 0;
};

struct StepEvent {
  enum class Kind { Matched, Lost, Queued } kind = Kind::Queued;
  int good = -1;
  int agent = -1;
  /// Matched only: index and time differences to the matched agent.
  std::int64_t delay = 0;
  double wait = 0.0;
  std::int64_t agent_index = -1;
};

/// One step of directed FCFS matching at position `index`.
StepEvent step_fcfs(const MatchingModel& model, UnmatchedList& state, Item item, std::int64_t index, double time = 0.0);

/// Base-(I+1) code of a first-appearance order: digit l is order[l] + 1.
/// The empty order has code 0.
std::uint64_t encode_order(const std::vector<int>& order, int n_agents);
std::vector<int> decode_order(std::uint64_t code, int n_agents);

struct BatchCounters {
  std::uint64_t events = 0;
  std::uint64_t agents = 0;
  std::uint64_t goods = 0;
  std::uint64_t empty_steps = 0;
  std::vector<std::uint64_t> good_arrivals;  // [good]
  std::vector<std::uint64_t> matches;        // [good * I + agent]
  std::vector<std::uint64_t> losses;         // [good]
  std::vector<double> delay_sum;             // [good * I + agent]
  std::vector<double> delay_sq;
  std::vector<double> wait_sum;
  std::vector<double> wait_sq;
  std::map<std::uint64_t, std::uint64_t> y_counts;  // first-appearance order -> steps

  BatchCounters() = default;
  BatchCounters(int n_goods, int n_agents);
  void merge(const BatchCounters& other);
};

struct SimStats {
  int n_goods = 0;
  int n_agents = 0;
  std::vector<BatchCounters> batches;
  /// Smallest delay observed (0 if no match).
  std::int64_t min_delay = 0;
  /// Unmatched agents at the end of the run.
  std::uint64_t final_unmatched = 0;

  BatchCounters totals() const;
  /// Adds batch k of `other` into batch k.
  void merge(const SimStats& other);
  bool operator==(const SimStats&) const;
};

struct SimOptions {
  std::uint64_t n_events = 1'000'000;
  std::uint64_t seed = 1;
  /// Default: 1% of n_events, at least 10^4, at most n_events / 10.
  std::optional<std::uint64_t> burn_in;
  int batches = 50;

  std::uint64_t effective_burn_in() const;
};

struct StepView {
  std::int64_t index = 0;
  Item item;
  StepEvent event;
  const UnmatchedList& state;
};

using StepObserver = std::function<void(const StepView&)>;

/// Simulates from the empty state. Throws UnstableModel for an unstable model
/// and DomainError when burn_in >= n_events or batches < 2.
SimStats run(const MatchingModel& model, const SimOptions& options, const StepObserver& observer = {});

/// Independent replications with the given seeds, merged in seed order.
SimStats run_replications(const MatchingModel& model, SimOptions options, const std::vector<std::uint64_t>& seeds);

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct SimEstimates {
  /// Fraction of steps with no unmatched agent.
  Estimate empty;
  Estimate total_loss;
  std::vector<std::vector<Estimate>> rate;  // [good][agent]
  std::vector<Estimate> loss;               // [good]
  std::vector<std::vector<std::optional<Estimate>>> delay_mean, delay_var, wait_mean, wait_var;  // [good][agent]
  std::vector<std::optional<Estimate>> agent_delay_mean, agent_delay_var, agent_wait_mean, agent_wait_var;
  std::map<std::uint64_t, Estimate> pi_y;  // includes code 0 (empty)
};

/// Pooled point estimates with batch-means standard errors.
SimEstimates estimate(const SimStats& stats);

}  // namespace fcfs::sim
