#include "fcfs/simulator.hpp"

#include <omp.h>

#include <algorithm>
#include <bit>
#include <exception>
#include <cmath>
#include <limits>

#include "fcfs/threads.hpp"

namespace fcfs::sim {

namespace {

std::vector<double> cumulative(const std::vector<double>& weights) {
  std::vector<double> cdf(weights.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    acc += weights[k];
    cdf[k] = acc;
  }
  return cdf;
}

}  // namespace

ItemSource::ItemSource(const MatchingModel& model, std::uint64_t seed)
    : items_(seed),
      clock_(seed ^ 0x9E3779B97F4A7C15ULL),
      p_agent_(model.lambda_bar() / model.total_rate()),
      total_rate_(model.total_rate()) {
  std::vector<double> alpha(model.agent_count());
  std::vector<double> beta(model.good_count());
  for (int i = 0; i < model.agent_count(); ++i) alpha[i] = model.alpha(i);
  for (int j = 0; j < model.good_count(); ++j) beta[j] = model.beta(j);
  alpha_cdf_ = cumulative(alpha);
  beta_cdf_ = cumulative(beta);
}

double ItemSource::uniform(std::mt19937_64& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

int ItemSource::pick(const std::vector<double>& cdf, double u) {
  const int last = static_cast<int>(cdf.size()) - 1;
  for (int k = 0; k < last; ++k) {
    if (u < cdf[k]) return k;
  }
  return last;
}

Item ItemSource::next() {
  if (uniform(items_) < p_agent_) return Item{Kind::Agent, pick(alpha_cdf_, uniform(items_))};
  return Item{Kind::Good, pick(beta_cdf_, uniform(items_))};
}

double ItemSource::next_gap() {
  return -std::log1p(-uniform(clock_)) / total_rate_;
}

void UnmatchedList::push(int type, std::int64_t index, double time) {
  queues_[type].push_back(Entry{type, index, time});
  ++size_;
}

int UnmatchedList::oldest_in(TypeSet types) const {
  int best = -1;
  std::int64_t best_index = std::numeric_limits<std::int64_t>::max();
  for (TypeSet t = types; t != 0; t &= t - 1) {
    const int type = std::countr_zero(t);
    if (type >= type_count()) break;
    const auto& q = queues_[type];
    if (!q.empty() && q.front().index < best_index) {
      best = type;
      best_index = q.front().index;
    }
  }
  return best;
}

UnmatchedList::Entry UnmatchedList::pop(int type) {
  Entry e = queues_[type].front();
  queues_[type].pop_front();
  --size_;
  return e;
}

std::vector<UnmatchedList::Entry> UnmatchedList::ordered() const {
  std::vector<Entry> all;
  all.reserve(size_);
  for (const auto& q : queues_) all.insert(all.end(), q.begin(), q.end());
  std::sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) { return a.index < b.index; });
  return all;
}

std::vector<int> UnmatchedList::first_appearance_order() const {
  std::vector<std::pair<std::int64_t, int>> fronts;
  for (int t = 0; t < type_count(); ++t) {
    if (!queues_[t].empty()) fronts.emplace_back(queues_[t].front().index, t);
  }
  std::sort(fronts.begin(), fronts.end());
  std::vector<int> order;
  order.reserve(fronts.size());
  for (const auto& f : fronts) order.push_back(f.second);
  return order;
}

StepEvent step_fcfs(const MatchingModel& model, UnmatchedList& state, Item item, std::int64_t index, double time) {
  StepEvent ev;
  if (item.kind == Kind::Agent) {
    state.push(item.type, index, time);
    ev.kind = StepEvent::Kind::Queued;
    ev.agent = item.type;
    return ev;
  }
  ev.good = item.type;
  const int agent = state.oldest_in(model.agents_of(item.type));
  if (agent < 0) {
    ev.kind = StepEvent::Kind::Lost;
    return ev;
  }
  const auto entry = state.pop(agent);
  ev.kind = StepEvent::Kind::Matched;
  ev.agent = agent;
  ev.delay = index - entry.index;
  ev.wait = time - entry.time;
  ev.agent_index = entry.index;
  return ev;
}

std::uint64_t encode_order(const std::vector<int>& order, int n_agents) {
  std::uint64_t code = 0;
  std::uint64_t scale = 1;
  for (int t : order) {
    code += static_cast<std::uint64_t>(t + 1) * scale;
    scale *= static_cast<std::uint64_t>(n_agents + 1);
  }
  return code;
}

std::vector<int> decode_order(std::uint64_t code, int n_agents) {
  std::vector<int> order;
  const auto base = static_cast<std::uint64_t>(n_agents + 1);
  while (code != 0) {
    order.push_back(static_cast<int>(code % base) - 1);
    code /= base;
  }
  return order;
}

BatchCounters::BatchCounters(int n_goods, int n_agents)
    : good_arrivals(n_goods, 0),
      matches(static_cast<std::size_t>(n_goods) * n_agents, 0),
      losses(n_goods, 0),
      delay_sum(matches.size(), 0.0),
      delay_sq(matches.size(), 0.0),
      wait_sum(matches.size(), 0.0),
      wait_sq(matches.size(), 0.0) {}

void BatchCounters::merge(const BatchCounters& o) {
  events += o.events;
  agents += o.agents;
  goods += o.goods;
  empty_steps += o.empty_steps;
  for (std::size_t k = 0; k < good_arrivals.size(); ++k) {
    good_arrivals[k] += o.good_arrivals[k];
    losses[k] += o.losses[k];
  }
  for (std::size_t k = 0; k < matches.size(); ++k) {
    matches[k] += o.matches[k];
    delay_sum[k] += o.delay_sum[k];
    delay_sq[k] += o.delay_sq[k];
    wait_sum[k] += o.wait_sum[k];
    wait_sq[k] += o.wait_sq[k];
  }
  for (const auto& [code, n] : o.y_counts) y_counts[code] += n;
}

BatchCounters SimStats::totals() const {
  BatchCounters t(n_goods, n_agents);
  for (const auto& b : batches) t.merge(b);
  return t;
}

void SimStats::merge(const SimStats& other) {
  if (batches.empty()) {
    *this = other;
    return;
  }
  for (std::size_t k = 0; k < batches.size() && k < other.batches.size(); ++k) batches[k].merge(other.batches[k]);
  if (other.min_delay > 0 && (min_delay == 0 || other.min_delay < min_delay)) min_delay = other.min_delay;
  final_unmatched += other.final_unmatched;
}

bool SimStats::operator==(const SimStats& o) const {
  if (n_goods != o.n_goods || n_agents != o.n_agents || min_delay != o.min_delay ||
      final_unmatched != o.final_unmatched || batches.size() != o.batches.size()) {
    return false;
  }
  for (std::size_t k = 0; k < batches.size(); ++k) {
    const auto& a = batches[k];
    const auto& b = o.batches[k];
    if (a.events != b.events || a.agents != b.agents || a.goods != b.goods || a.empty_steps != b.empty_steps ||
        a.good_arrivals != b.good_arrivals || a.matches != b.matches || a.losses != b.losses ||
        a.delay_sum != b.delay_sum || a.delay_sq != b.delay_sq || a.wait_sum != b.wait_sum ||
        a.wait_sq != b.wait_sq || a.y_counts != b.y_counts) {
      return false;
    }
  }
  return true;
}

std::uint64_t SimOptions::effective_burn_in() const {
  if (burn_in) return *burn_in;
  const std::uint64_t wanted = std::max<std::uint64_t>(10'000, n_events / 100);
  return std::min(wanted, n_events / 10);
}

SimStats run(const MatchingModel& model, const SimOptions& options, const StepObserver& observer) {
  if (!check_stability(model).stable) throw Error(ErrorCode::UnstableModel, "cannot simulate an unstable model");
  const std::uint64_t burn_in = options.effective_burn_in();
  if (burn_in >= options.n_events) throw Error(ErrorCode::DomainError, "events must exceed burn-in");
  if (options.batches < 2) throw Error(ErrorCode::DomainError, "need at least two batches");
  const std::uint64_t measured = options.n_events - burn_in;
  if (measured < static_cast<std::uint64_t>(options.batches)) {
    throw Error(ErrorCode::DomainError, "fewer measured events than batches");
  }

  const int n_goods = model.good_count();
  const int n_agents = model.agent_count();
  SimStats stats;
  stats.n_goods = n_goods;
  stats.n_agents = n_agents;
  stats.batches.assign(options.batches, BatchCounters(n_goods, n_agents));
  const std::uint64_t batch_len = measured / options.batches;

  ItemSource source(model, options.seed);
  UnmatchedList state(n_agents);
  double clock = 0.0;
  for (std::uint64_t n = 0; n < options.n_events; ++n) {
    clock += source.next_gap();
    const Item item = source.next();
    const auto index = static_cast<std::int64_t>(n);
    const StepEvent ev = step_fcfs(model, state, item, index, clock);
    if (observer) observer(StepView{index, item, ev, state});
    if (n < burn_in) continue;

    const auto k = std::min<std::uint64_t>((n - burn_in) / batch_len, options.batches - 1);
    BatchCounters& b = stats.batches[k];
    ++b.events;
    if (item.kind == Kind::Agent) {
      ++b.agents;
    } else {
      ++b.goods;
      ++b.good_arrivals[item.type];
      if (ev.kind == StepEvent::Kind::Lost) {
        ++b.losses[item.type];
      } else {
        const std::size_t p = static_cast<std::size_t>(ev.good) * n_agents + ev.agent;
        const auto d = static_cast<double>(ev.delay);
        ++b.matches[p];
        b.delay_sum[p] += d;
        b.delay_sq[p] += d * d;
        b.wait_sum[p] += ev.wait;
        b.wait_sq[p] += ev.wait * ev.wait;
        if (stats.min_delay == 0 || ev.delay < stats.min_delay) stats.min_delay = ev.delay;
      }
    }
    if (state.empty()) {
      ++b.empty_steps;
      ++b.y_counts[0];
    } else {
      ++b.y_counts[encode_order(state.first_appearance_order(), n_agents)];
    }
  }
  stats.final_unmatched = state.size();
  return stats;
}

SimStats run_replications(const MatchingModel& model, SimOptions options, const std::vector<std::uint64_t>& seeds) {
  std::vector<SimStats> parts(seeds.size());
  std::vector<std::exception_ptr> failures(seeds.size());
  const auto count = static_cast<std::ptrdiff_t>(seeds.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_count())
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    SimOptions o = options;
    o.seed = seeds[k];
    try {
      parts[k] = run(model, o);
    } catch (...) {
      failures[k] = std::current_exception();
    }
  }
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }
  SimStats total;
  for (const auto& p : parts) total.merge(p);
  return total;
}

namespace {

/// Pooled value num/den with the spread of per-batch ratios as the error.
template <class Num, class Den>
std::optional<Estimate> batch_ratio(const SimStats& stats, Num num, Den den) {
  double pooled_num = 0.0;
  double pooled_den = 0.0;
  std::vector<double> per_batch;
  for (const auto& b : stats.batches) {
    const double n = num(b);
    const double d = den(b);
    pooled_num += n;
    pooled_den += d;
    if (d > 0.0) per_batch.push_back(n / d);
  }
  if (!(pooled_den > 0.0)) return std::nullopt;
  Estimate e{pooled_num / pooled_den, 0.0};
  const auto m = static_cast<double>(per_batch.size());
  if (per_batch.size() >= 2) {
    double mean = 0.0;
    for (double v : per_batch) mean += v;
    mean /= m;
    double ss = 0.0;
    for (double v : per_batch) ss += (v - mean) * (v - mean);
    e.std_error = std::sqrt(ss / (m - 1.0) / m);
  }
  return e;
}

/// Pooled variance sq/n - (sum/n)^2 with the spread of per-batch variances.
template <class Sum, class Sq, class Count>
std::optional<Estimate> batch_variance(const SimStats& stats, Sum sum, Sq sq, Count count) {
  double ps = 0.0;
  double pq = 0.0;
  double pn = 0.0;
  std::vector<double> per_batch;
  for (const auto& b : stats.batches) {
    const double s = sum(b);
    const double q = sq(b);
    const double n = count(b);
    ps += s;
    pq += q;
    pn += n;
    if (n > 1.0) per_batch.push_back(q / n - (s / n) * (s / n));
  }
  if (!(pn > 0.0)) return std::nullopt;
  Estimate e{pq / pn - (ps / pn) * (ps / pn), 0.0};
  const auto m = static_cast<double>(per_batch.size());
  if (per_batch.size() >= 2) {
    double mean = 0.0;
    for (double v : per_batch) mean += v;
    mean /= m;
    double ss = 0.0;
    for (double v : per_batch) ss += (v - mean) * (v - mean);
    e.std_error = std::sqrt(ss / (m - 1.0) / m);
  }
  return e;
}

}  // namespace

SimEstimates estimate(const SimStats& stats) {
  const int J = stats.n_goods;
  const int I = stats.n_agents;
  auto goods = [](const BatchCounters& b) { return static_cast<double>(b.goods); };
  auto events = [](const BatchCounters& b) { return static_cast<double>(b.events); };

  SimEstimates out;
  out.empty = batch_ratio(stats, [](const BatchCounters& b) { return static_cast<double>(b.empty_steps); }, events)
                  .value_or(Estimate{});
  out.total_loss = batch_ratio(
                       stats,
                       [](const BatchCounters& b) {
                         std::uint64_t s = 0;
                         for (auto v : b.losses) s += v;
                         return static_cast<double>(s);
                       },
                       goods)
                       .value_or(Estimate{});

  out.rate.assign(J, std::vector<Estimate>(I));
  out.loss.assign(J, Estimate{});
  out.delay_mean.assign(J, std::vector<std::optional<Estimate>>(I));
  out.delay_var = out.delay_mean;
  out.wait_mean = out.delay_mean;
  out.wait_var = out.delay_mean;
  for (int j = 0; j < J; ++j) {
    out.loss[j] =
        batch_ratio(stats, [j](const BatchCounters& b) { return static_cast<double>(b.losses[j]); }, goods).value_or(Estimate{});
    for (int i = 0; i < I; ++i) {
      const std::size_t p = static_cast<std::size_t>(j) * I + i;
      auto count = [p](const BatchCounters& b) { return static_cast<double>(b.matches[p]); };
      out.rate[j][i] = batch_ratio(stats, count, goods).value_or(Estimate{});
      out.delay_mean[j][i] = batch_ratio(stats, [p](const BatchCounters& b) { return b.delay_sum[p]; }, count);
      out.delay_var[j][i] = batch_variance(
          stats, [p](const BatchCounters& b) { return b.delay_sum[p]; }, [p](const BatchCounters& b) { return b.delay_sq[p]; },
          count);
      out.wait_mean[j][i] = batch_ratio(stats, [p](const BatchCounters& b) { return b.wait_sum[p]; }, count);
      out.wait_var[j][i] = batch_variance(
          stats, [p](const BatchCounters& b) { return b.wait_sum[p]; }, [p](const BatchCounters& b) { return b.wait_sq[p]; },
          count);
    }
  }

  out.agent_delay_mean.resize(I);
  out.agent_delay_var.resize(I);
  out.agent_wait_mean.resize(I);
  out.agent_wait_var.resize(I);
  for (int i = 0; i < I; ++i) {
    auto over_goods = [I, J, i](const std::vector<double>& v) {
      double s = 0.0;
      for (int j = 0; j < J; ++j) s += v[static_cast<std::size_t>(j) * I + i];
      return s;
    };
    auto count = [I, J, i](const BatchCounters& b) {
      std::uint64_t s = 0;
      for (int j = 0; j < J; ++j) s += b.matches[static_cast<std::size_t>(j) * I + i];
      return static_cast<double>(s);
    };
    auto dsum = [&](const BatchCounters& b) { return over_goods(b.delay_sum); };
    auto dsq = [&](const BatchCounters& b) { return over_goods(b.delay_sq); };
    auto wsum = [&](const BatchCounters& b) { return over_goods(b.wait_sum); };
    auto wsq = [&](const BatchCounters& b) { return over_goods(b.wait_sq); };
    out.agent_delay_mean[i] = batch_ratio(stats, dsum, count);
    out.agent_delay_var[i] = batch_variance(stats, dsum, dsq, count);
    out.agent_wait_mean[i] = batch_ratio(stats, wsum, count);
    out.agent_wait_var[i] = batch_variance(stats, wsum, wsq, count);
  }

  std::map<std::uint64_t, bool> codes;
  for (const auto& b : stats.batches) {
    for (const auto& [code, n] : b.y_counts) codes[code] = true;
  }
  for (const auto& [code, unused] : codes) {
    (void)unused;
    auto hits = [code](const BatchCounters& b) {
      const auto it = b.y_counts.find(code);
      return it == b.y_counts.end() ? 0.0 : static_cast<double>(it->second);
    };
    out.pi_y[code] = batch_ratio(stats, hits, events).value_or(Estimate{});
  }
  return out;
}

}  // namespace fcfs::sim
