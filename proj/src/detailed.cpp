#include "fcfs/detailed.hpp"

#include <boost/math/distributions/chi_squared.hpp>

namespace fcfs::sim {

Matching match_forward(const MatchingModel& model, const std::vector<Item>& sequence) {
  Matching m;
  m.partner.assign(sequence.size(), -1);
  UnmatchedList state(model.agent_count());
  for (std::size_t n = 0; n < sequence.size(); ++n) {
    const auto ev = step_fcfs(model, state, sequence[n], static_cast<std::int64_t>(n));
    if (ev.kind == StepEvent::Kind::Matched) {
      m.partner[n] = ev.agent_index;
      m.partner[ev.agent_index] = static_cast<std::int64_t>(n);
    }
  }
  return m;
}

UState detailed_state(const std::vector<Item>& prefix, const Matching& matches) {
  std::size_t first = prefix.size();
  for (std::size_t p = 0; p < prefix.size(); ++p) {
    if (prefix[p].kind == Kind::Agent && matches.partner[p] < 0) {
      first = p;
      break;
    }
  }
  UState u;
  for (std::size_t p = first; p < prefix.size(); ++p) {
    const Item& it = prefix[p];
    const std::int64_t q = matches.partner[p];
    if (it.kind == Kind::Agent) {
      u.push_back(q < 0 ? UItem{Mark::Unmatched, it.type} : UItem{Mark::ExchangedGood, prefix[q].type});
    } else {
      u.push_back(q < 0 ? UItem{Mark::ExchangedGood, it.type} : UItem{Mark::ExchangedAgent, prefix[q].type});
    }
  }
  return u;
}

bool is_admissible(const MatchingModel& model, const UState& u) {
  if (u.empty()) return true;
  if (u.front().mark != Mark::Unmatched) return false;
  TypeSet unmatched = 0;
  for (const UItem& x : u) {
    switch (x.mark) {
      case Mark::Unmatched:
        unmatched |= single(x.type);
        break;
      case Mark::ExchangedAgent:
        break;
      case Mark::ExchangedGood:
        if (model.agents_of(x.type) & unmatched) return false;
        break;
      case Mark::Good:
        return false;
    }
  }
  return true;
}

void DetailedTracker::observe(std::int64_t index, Item item, const StepEvent& event) {
  switch (event.kind) {
    case StepEvent::Kind::Queued:
      if (items_.empty()) start_ = index;
      items_.push_back(UItem{Mark::Unmatched, item.type});
      return;
    case StepEvent::Kind::Lost:
      if (!items_.empty()) items_.push_back(UItem{Mark::ExchangedGood, item.type});
      return;
    case StepEvent::Kind::Matched:
      items_[static_cast<std::size_t>(event.agent_index - start_)] = UItem{Mark::ExchangedGood, event.good};
      items_.push_back(UItem{Mark::ExchangedAgent, event.agent});
      while (!items_.empty() && items_.front().mark != Mark::Unmatched) {
        items_.pop_front();
        ++start_;
      }
      return;
  }
}

bool DetailedTracker::admissible() const {
  return is_admissible(model_, state());
}

std::vector<Item> exchange(const std::vector<Item>& sequence, const Matching& matches) {
  std::vector<Item> out = sequence;
  for (std::size_t p = 0; p < sequence.size(); ++p) {
    const std::int64_t q = matches.partner[p];
    if (q >= 0) out[p] = sequence[q];
  }
  return out;
}

const Item& ExchangedSequence::certified(std::int64_t position) const {
  if (position < 0 || position >= certified_end) {
    throw Error(ErrorCode::OpenWindow, "position " + std::to_string(position) + " lies past the first open agent");
  }
  return items[position];
}

ExchangedSequence exchange_transform(const MatchingModel& model, const std::vector<Item>& sequence) {
  ExchangedSequence ex;
  ex.original = match_forward(model, sequence);
  ex.items = sim::exchange(sequence, ex.original);
  ex.certified_end = static_cast<std::int64_t>(sequence.size());
  for (std::size_t p = 0; p < sequence.size(); ++p) {
    if (sequence[p].kind == Kind::Agent && ex.original.partner[p] < 0) {
      ex.certified_end = static_cast<std::int64_t>(p);
      break;
    }
  }
  return ex;
}

Matching match_reversed(const MatchingModel& model, const ExchangedSequence& ex) {
  const auto n = static_cast<std::int64_t>(ex.items.size());
  Matching m;
  m.partner.assign(ex.items.size(), -1);
  // Reversed time runs from the highest position down, so a larger position
  // is an older arrival; store negated positions to reuse the FIFO list.
  UnmatchedList state(model.agent_count());
  for (std::int64_t p = n - 1; p >= 0; --p) {
    const Item& it = ex.items[p];
    const bool open_agent = it.kind == Kind::Agent && ex.original.partner[p] < 0;
    if (open_agent) continue;
    const auto ev = step_fcfs(model, state, it, -p);
    if (ev.kind == StepEvent::Kind::Matched) {
      const std::int64_t q = -ev.agent_index;
      m.partner[p] = q;
      m.partner[q] = p;
    }
  }
  return m;
}

std::vector<double> item_probabilities(const MatchingModel& model) {
  std::vector<double> p;
  for (int i = 0; i < model.agent_count(); ++i) p.push_back(model.lambda(i) / model.total_rate());
  for (int j = 0; j < model.good_count(); ++j) p.push_back(model.mu(j) / model.total_rate());
  return p;
}

ReversibilityReport verify_reversibility(const MatchingModel& model, std::uint64_t n_events, std::uint64_t seed) {
  ItemSource source(model, seed);
  std::vector<Item> seq(n_events);
  for (auto& it : seq) it = source.next();

  const ExchangedSequence ex = exchange_transform(model, seq);
  const Matching rev = match_reversed(model, ex);

  ReversibilityReport r;
  r.window = static_cast<std::int64_t>(n_events);
  r.certified_end = ex.certified_end;
  for (std::int64_t p = 0; p < ex.certified_end; ++p) {
    if (seq[p].kind == Kind::Agent) {
      ++r.pairs_checked;
      if (rev.partner[p] == ex.original.partner[p]) ++r.pairs_coinciding;
    } else if (ex.original.partner[p] < 0) {
      ++r.lost_checked;
      if (rev.partner[p] < 0) ++r.lost_coinciding;
    }
  }

  const std::vector<double> prob = item_probabilities(model);
  const int n_agents = model.agent_count();
  std::vector<double> observed(prob.size(), 0.0);
  for (std::int64_t p = 0; p < ex.certified_end; ++p) {
    const Item& it = ex.certified(p);
    observed[it.kind == Kind::Agent ? it.type : n_agents + it.type] += 1.0;
  }
  const auto total = static_cast<double>(ex.certified_end);
  if (total > 0.0) {
    for (std::size_t k = 0; k < prob.size(); ++k) {
      const double expected = total * prob[k];
      r.chi_square += (observed[k] - expected) * (observed[k] - expected) / expected;
    }
    r.dof = static_cast<int>(prob.size()) - 1;
    if (r.dof > 0) {
      boost::math::chi_squared dist(r.dof);
      r.p_value = boost::math::cdf(boost::math::complement(dist, r.chi_square));
    }
  }
  return r;
}

}  // namespace fcfs::sim
