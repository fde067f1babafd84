#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "fcfs/simulator.hpp"

namespace fcfs::sim {

/// Partner of every position after forward directed FCFS matching of a
/// finite sequence: for an agent, the matching good's position or -1 if still
/// open; for a good, the matched agent's position or -1 if lost.
struct Matching {
  std::vector<std::int64_t> partner;
};

Matching match_forward(const MatchingModel& model, const std::vector<Item>& sequence);

/// Marks of the detailed chain: an unmatched agent c, an agent exchanged into
/// its good's position c~, a good exchanged into its agent's position (or a
/// lost good left in place) s~, and a plain good s.
enum class Mark { Unmatched, ExchangedAgent, ExchangedGood, Good };

struct UItem {
  Mark mark = Mark::Unmatched;
  int type = 0;

  bool operator==(const UItem&) const = default;
  auto operator<=>(const UItem&) const = default;
};

using UState = std::vector<UItem>;

/// U-state after the whole prefix: positions from the first unmatched agent
/// to the end, marked as above. Empty when every agent is matched.
UState detailed_state(const std::vector<Item>& prefix, const Matching& matches);

/// Empty, or starts with an unmatched agent, uses only c / c~ / s~ marks, and
/// no unmatched c_i precedes an s~_j with (s_j, c_i) an edge.
bool is_admissible(const MatchingModel& model, const UState& u);

/// Maintains the U-state incrementally alongside a simulation.
class DetailedTracker {
 public:
  explicit DetailedTracker(const MatchingModel& model) : model_(model) {}

  /// Applies the step at position `index`; `event` must come from step_fcfs.
  void observe(std::int64_t index, Item item, const StepEvent& event);
  UState state() const { return UState(items_.begin(), items_.end()); }
  std::size_t size() const { return items_.size(); }
  bool admissible() const;

 private:
  const MatchingModel& model_;
  std::deque<UItem> items_;
  std::int64_t start_ = 0;  // position of items_.front()
};

/// Swaps the two items of every matched pair; lost goods and open agents stay
/// in place. Applying it twice with the same matching is the identity.
std::vector<Item> exchange(const std::vector<Item>& sequence, const Matching& matches);

struct ExchangedSequence {
  std::vector<Item> items;
  Matching original;
  /// Position of the first still-open agent (or the length): every position
  /// before it is determined by the window alone.
  std::int64_t certified_end = 0;

  /// Item at `position`; throws OpenWindow at or past certified_end.
  const Item& certified(std::int64_t position) const;
};

ExchangedSequence exchange_transform(const MatchingModel& model, const std::vector<Item>& sequence);

/// Directed FCFS matching run in reversed time (highest position first) on
/// an exchanged sequence, with agents acting as the earlier arrivals. Positions
/// whose original item is an open agent are skipped.
Matching match_reversed(const MatchingModel& model, const ExchangedSequence& exchanged);

struct ReversibilityReport {
  std::int64_t window = 0;
  std::int64_t certified_end = 0;
  std::int64_t pairs_checked = 0;
  std::int64_t pairs_coinciding = 0;
  std::int64_t lost_checked = 0;
  std::int64_t lost_coinciding = 0;
  double chi_square = 0.0;
  int dof = 0;
  double p_value = 1.0;

  bool coincide() const { return pairs_checked == pairs_coinciding && lost_checked == lost_coinciding; }
};

/// Simulates n_events items, exchanges, re-matches in reversed time and
/// chi-square tests the certified exchanged items against the item law.
ReversibilityReport verify_reversibility(const MatchingModel& model, std::uint64_t n_events, std::uint64_t seed);

/// Item-law probabilities over I + J categories (agents first).
std::vector<double> item_probabilities(const MatchingModel& model);

}  // namespace fcfs::sim
