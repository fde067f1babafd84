#include "fcfs/enumerate.hpp"

#include <string>

namespace fcfs {

void check_enumerable(const MatchingModel& model, const EnumerationOptions& options) {
  const int n = model.agent_count();
  if (n > options.max_types && !options.allow_large) {
    throw Error(ErrorCode::TooManyTypes, std::to_string(n) + " agent types exceeds the enumeration cap of " +
                                             std::to_string(options.max_types) + " (override to proceed)");
  }
  const double total = model.total_rate();
  for (TypeSet c : canonical_subsets(n)) {
    const double gap = model.mu_of(compatible_goods(model, c)) - model.lambda_of(c);
    if (!(gap / total >= kMinStageProbability)) {
      std::string names;
      for (int i : members(c)) names += (names.empty() ? "" : ",") + model.agent_name(i);
      throw Error(ErrorCode::UnstableModel, "model is unstable or too close to instability at agent subset {" + names + "}");
    }
  }
}

std::uint64_t ordered_subset_count(int n) {
  std::uint64_t total = 0;
  std::uint64_t falling = 1;
  for (int k = 1; k <= n; ++k) {
    falling *= static_cast<std::uint64_t>(n - k + 1);
    total += falling;
  }
  return total;
}

namespace detail {

std::vector<WorkItem> make_work_items(int n_agents) {
  std::vector<WorkItem> items;
  if (n_agents == 1) {
    items.push_back({{0}, true});
    return items;
  }
  for (int first = 0; first < n_agents; ++first) {
    items.push_back({{first}, false});
    for (int second = 0; second < n_agents; ++second) {
      if (second != first) items.push_back({{first, second}, true});
    }
  }
  return items;
}

}  // namespace detail

}  // namespace fcfs
