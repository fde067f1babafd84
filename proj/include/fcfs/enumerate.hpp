#pragma once

#include <omp.h>

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fcfs/model.hpp"
#include "fcfs/threads.hpp"

namespace fcfs {

struct EnumerationOptions {
  /// Largest number of agent types enumerated unless allow_large is set.
  int max_types = 12;
  bool allow_large = false;
  /// 0 selects worker_count()'s default.
  int threads = 0;
};

/// Enumeration refuses prefixes whose geometric stage probability
/// (mu_S - lambda) / (lambda_bar + mu_bar) falls below this.
inline constexpr double kMinStageProbability = 1e-12;

/// One ordered nonempty subset (C_1, ..., C_k) of agent types together with
/// the per-prefix sums needed by every pass. Index l below is 0-based.
struct PermutationTerm {
  std::span<const int> order;
  /// lambda of {C_1..C_l}
  std::span<const double> prefix_lambda;
  /// mu of S({C_1..C_l})
  std::span<const double> prefix_mu;
  /// S(C_l) minus S({C_1..C_{l-1}}): the good types whose first compatible
  /// agent type in this order is C_l.
  std::span<const TypeSet> new_goods;
  /// prod_l lambda_{C_l} / (prefix_mu[l] - prefix_lambda[l]); proportional to
  /// the stationary probability that (C_1..C_k) is the first-appearance order.
  double weight = 0.0;

  int size() const noexcept { return static_cast<int>(order.size()); }
  double gap(int l) const noexcept { return prefix_mu[l] - prefix_lambda[l]; }
};

/// Throws TooManyTypes (over the cap) or UnstableModel (some agent subset has
/// a stage probability below kMinStageProbability).
void check_enumerable(const MatchingModel& model, const EnumerationOptions& options);

/// Number of ordered nonempty subsets of n types: sum_k n!/(n-k)!.
std::uint64_t ordered_subset_count(int n);

namespace detail {

struct WorkItem {
  std::vector<int> prefix;
  bool subtree = false;
};

/// Partition of the ordered-subset tree into independent, equally sized
/// pieces, listed in depth-first (declared type) order.
std::vector<WorkItem> make_work_items(int n_agents);

class TermWalker {
 public:
  explicit TermWalker(const MatchingModel& model) : model_(model) {}

  template <class Acc>
  void run(std::span<const int> prefix, bool subtree, Acc& acc) {
    TypeSet used = 0;
    for (std::size_t d = 0; d < prefix.size(); ++d) {
      push(static_cast<int>(d), prefix[d]);
      used |= single(prefix[d]);
    }
    const int depth = static_cast<int>(prefix.size());
    acc.visit(term(depth));
    if (subtree) descend(depth, used, acc);
  }

 private:
  template <class Acc>
  void descend(int depth, TypeSet used, Acc& acc) {
    const int n = model_.agent_count();
    for (int t = 0; t < n; ++t) {
      if (contains(used, t)) continue;
      push(depth, t);
      acc.visit(term(depth + 1));
      if (depth + 1 < n) descend(depth + 1, used | single(t), acc);
    }
  }

  void push(int depth, int type) {
    const TypeSet covered_before = depth > 0 ? covered_[depth - 1] : 0;
    const TypeSet fresh = model_.goods_of(type) & ~covered_before;
    double mu_fresh = 0.0;
    for (TypeSet s = fresh; s != 0; s &= s - 1) mu_fresh += model_.mu(std::countr_zero(s));
    order_[depth] = type;
    new_goods_[depth] = fresh;
    covered_[depth] = covered_before | fresh;
    lambda_[depth] = (depth > 0 ? lambda_[depth - 1] : 0.0) + model_.lambda(type);
    mu_[depth] = (depth > 0 ? mu_[depth - 1] : 0.0) + mu_fresh;
    weight_[depth] = (depth > 0 ? weight_[depth - 1] : 1.0) * model_.lambda(type) / (mu_[depth] - lambda_[depth]);
  }

  PermutationTerm term(int size) const {
    const auto n = static_cast<std::size_t>(size);
    return PermutationTerm{std::span<const int>(order_.data(), n),
                           std::span<const double>(lambda_.data(), n),
                           std::span<const double>(mu_.data(), n),
                           std::span<const TypeSet>(new_goods_.data(), n),
                           weight_[size - 1]};
  }

  const MatchingModel& model_;
  std::array<int, kMaxTypes> order_{};
  std::array<TypeSet, kMaxTypes> new_goods_{};
  std::array<TypeSet, kMaxTypes> covered_{};
  std::array<double, kMaxTypes> lambda_{};
  std::array<double, kMaxTypes> mu_{};
  std::array<double, kMaxTypes> weight_{};
};

}  // namespace detail

/// Visits every ordered nonempty subset of agent types exactly once and
/// returns the reduction of the per-worker accumulators.
///
/// `make()` builds an empty accumulator; an accumulator provides
/// `void visit(const PermutationTerm&)` and `void merge(const Acc&)`, neither
/// of which may throw. Work items run in parallel; partial accumulators are
/// merged in depth-first order, so the result is bit-identical for any thread
/// count.
template <class Make>
auto enumerate_terms(const MatchingModel& model, const EnumerationOptions& options, Make make) {
  using Acc = decltype(make());
  check_enumerable(model, options);
  const auto items = detail::make_work_items(model.agent_count());
  const auto count = static_cast<std::ptrdiff_t>(items.size());
  std::vector<std::optional<Acc>> partial(items.size());
  const int threads = worker_count(options.threads);

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
  for (std::ptrdiff_t w = 0; w < count; ++w) {
    detail::TermWalker walker(model);
    Acc acc = make();
    walker.run(std::span<const int>(items[w].prefix), items[w].subtree, acc);
    partial[w].emplace(std::move(acc));
  }

  Acc total = make();
  for (const auto& p : partial) total.merge(*p);
  return total;
}

}  // namespace fcfs
