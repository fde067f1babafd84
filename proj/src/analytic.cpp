#include "fcfs/analytic.hpp"

#include <array>
#include <set>

namespace fcfs {

namespace {

class WeightAccumulator {
 public:
  void visit(const PermutationTerm& term) { total_ += term.weight; }
  void merge(const WeightAccumulator& other) { total_ += other.total_; }
  double value() const { return total_.value(); }

 private:
  CompensatedSum total_;
};

std::vector<std::vector<bool>> edge_table(const MatchingModel& model) {
  std::vector<std::vector<bool>> edge(model.good_count(), std::vector<bool>(model.agent_count(), false));
  for (int j = 0; j < model.good_count(); ++j) {
    for (int i = 0; i < model.agent_count(); ++i) edge[j][i] = model.compatible(j, i);
  }
  return edge;
}

std::optional<Moments> mixture(const std::vector<double>& weights, const std::vector<std::optional<Moments>>& parts) {
  double total = 0.0;
  double mean = 0.0;
  double second = 0.0;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (!parts[k] || weights[k] <= 0.0) continue;
    total += weights[k];
    mean += weights[k] * parts[k]->mean;
    second += weights[k] * (parts[k]->variance + parts[k]->mean * parts[k]->mean);
  }
  if (total <= 0.0) return std::nullopt;
  mean /= total;
  second /= total;
  return Moments{mean, second - mean * mean};
}

class OrderCollector {
 public:
  explicit OrderCollector(double min_weight) : min_weight_(min_weight) {}

  void visit(const PermutationTerm& term) {
    if (term.weight >= min_weight_) kept_.push_back({{term.order.begin(), term.order.end()}, term.weight});
  }
  void merge(const OrderCollector& other) { kept_.insert(kept_.end(), other.kept_.begin(), other.kept_.end()); }
  std::vector<OrderProbability>& kept() { return kept_; }

 private:
  double min_weight_;
  std::vector<OrderProbability> kept_;
};

}  // namespace

double RateReport::total_loss() const {
  CompensatedSum s;
  for (double v : loss) s += v;
  return s.value();
}

double RateReport::total_matched() const {
  CompensatedSum s;
  for (const auto& row : rate) {
    for (double v : row) s += v;
  }
  return s.value();
}

void PairSums::merge(const PairSums& other) {
  weight += other.weight;
  delay_mean += other.delay_mean;
  delay_mean_sq += other.delay_mean_sq;
  delay_var += other.delay_var;
  wait_mean += other.wait_mean;
  wait_mean_sq += other.wait_mean_sq;
  wait_var += other.wait_var;
}

MomentAccumulator::MomentAccumulator(int n_goods, int n_agents, double total_rate)
    : n_goods_(n_goods),
      n_agents_(n_agents),
      total_rate_(total_rate),
      pairs_(static_cast<std::size_t>(n_goods) * n_agents) {}

void MomentAccumulator::visit(const PermutationTerm& term) {
  const int k = term.size();
  const double x = term.weight;
  weight_total_ += x;

  // Suffix sums over stages h = l..k-1.
  std::array<double, kMaxTypes + 1> inv_p{};
  std::array<double, kMaxTypes + 1> var_p{};
  std::array<double, kMaxTypes + 1> inv_theta{};
  std::array<double, kMaxTypes + 1> inv_theta_sq{};
  for (int h = k - 1; h >= 0; --h) {
    const double theta = term.gap(h);
    const double p = theta / total_rate_;
    inv_p[h] = inv_p[h + 1] + 1.0 / p;
    var_p[h] = var_p[h + 1] + (1.0 - p) / (p * p);
    inv_theta[h] = inv_theta[h + 1] + 1.0 / theta;
    inv_theta_sq[h] = inv_theta_sq[h + 1] + 1.0 / (theta * theta);
  }

  for (int l = 0; l < k; ++l) {
    const int agent = term.order[l];
    for (TypeSet goods = term.new_goods[l]; goods != 0; goods &= goods - 1) {
      const int good = std::countr_zero(goods);
      PairSums& s = pairs_[good * n_agents_ + agent];
      s.weight += x;
      s.delay_mean += x * inv_p[l];
      s.delay_mean_sq += x * inv_p[l] * inv_p[l];
      s.delay_var += x * var_p[l];
      s.wait_mean += x * inv_theta[l];
      s.wait_mean_sq += x * inv_theta[l] * inv_theta[l];
      s.wait_var += x * inv_theta_sq[l];
    }
  }
}

void MomentAccumulator::merge(const MomentAccumulator& other) {
  weight_total_ += other.weight_total_;
  for (std::size_t k = 0; k < pairs_.size(); ++k) pairs_[k].merge(other.pairs_[k]);
}

double normalizing_constant(const MatchingModel& model, const EnumerationOptions& options) {
  const auto acc = enumerate_terms(model, options, [] { return WeightAccumulator{}; });
  return 1.0 / (1.0 + acc.value());
}

double pi_y_perm_given_b(const MatchingModel& model, std::span<const int> order, double b) {
  if (order.empty()) throw Error(ErrorCode::DomainError, "order must be nonempty");
  TypeSet used = 0;
  TypeSet covered = 0;
  double lambda_set = 0.0;
  double product = b;
  for (int t : order) {
    if (t < 0 || t >= model.agent_count()) {
      throw Error(ErrorCode::UnknownIdentifier, "agent index " + std::to_string(t) + " out of range");
    }
    if (contains(used, t)) {
      throw Error(ErrorCode::DuplicateType, "agent type '" + model.agent_name(t) + "' repeated in order");
    }
    used |= single(t);
    covered |= model.goods_of(t);
    lambda_set += model.lambda(t);
    product *= model.lambda(t) / (model.mu_of(covered) - lambda_set);
  }
  return product;
}

double pi_y_perm(const MatchingModel& model, std::span<const int> order, const EnumerationOptions& options) {
  // Validate the order before paying for the enumeration.
  pi_y_perm_given_b(model, order, 1.0);
  return pi_y_perm_given_b(model, order, normalizing_constant(model, options));
}

double pi_y_perm(const MatchingModel& model, std::span<const std::string> order, const EnumerationOptions& options) {
  std::vector<int> idx;
  for (const auto& name : order) idx.push_back(model.agent_index(name));
  return pi_y_perm(model, idx, options);
}

std::vector<OrderProbability> pi_y_table(const MatchingModel& model, double min_probability,
                                         const EnumerationOptions& options) {
  const double b = normalizing_constant(model, options);
  auto acc = enumerate_terms(model, options, [&] { return OrderCollector(min_probability / b); });
  auto out = std::move(acc.kept());
  for (auto& o : out) o.probability *= b;
  return out;
}

AnalyticResult finalize(const MatchingModel& model, const MomentAccumulator& sums) {
  const int n_goods = model.good_count();
  const int n_agents = model.agent_count();
  AnalyticResult out;

  RateReport& r = out.rates;
  r.goods = model.good_names();
  r.agents = model.agent_names();
  r.edge = edge_table(model);
  r.b = 1.0 / (1.0 + sums.weight_total());
  r.rate.assign(n_goods, std::vector<double>(n_agents, 0.0));
  r.loss.assign(n_goods, 0.0);
  r.eta.assign(n_goods, std::vector<double>(n_agents, 0.0));
  r.eta_lost.assign(n_goods, 0.0);
  r.theta.assign(n_agents, std::vector<double>(n_goods, 0.0));

  for (int j = 0; j < n_goods; ++j) {
    const double share = model.mu(j) / model.mu_bar();
    CompensatedSum matched;
    for (int i = 0; i < n_agents; ++i) {
      r.rate[j][i] = r.b * share * sums.pair(j, i).weight.value();
      matched += r.rate[j][i];
    }
    r.loss[j] = share - matched.value();
    const double outcomes = r.loss[j] + matched.value();
    for (int i = 0; i < n_agents; ++i) r.eta[j][i] = r.rate[j][i] / outcomes;
    r.eta_lost[j] = r.loss[j] / outcomes;
  }
  for (int i = 0; i < n_agents; ++i) {
    CompensatedSum served;
    for (int j = 0; j < n_goods; ++j) served += r.rate[j][i];
    for (int j = 0; j < n_goods; ++j) r.theta[i][j] = served.value() > 0.0 ? r.rate[j][i] / served.value() : 0.0;
  }

  DelayReport& d = out.delays;
  d.goods = r.goods;
  d.agents = r.agents;
  d.pair_delay.assign(n_goods, std::vector<std::optional<Moments>>(n_agents));
  d.pair_wait.assign(n_goods, std::vector<std::optional<Moments>>(n_agents));
  for (int j = 0; j < n_goods; ++j) {
    for (int i = 0; i < n_agents; ++i) {
      const PairSums& s = sums.pair(j, i);
      const double w = s.weight.value();
      if (!r.edge[j][i] || !(w > 0.0) || !(r.rate[j][i] > 0.0)) continue;
      const double mean = s.delay_mean.value() / w;
      d.pair_delay[j][i] = Moments{mean, s.delay_var.value() / w + s.delay_mean_sq.value() / w - mean * mean};
      const double wmean = s.wait_mean.value() / w;
      d.pair_wait[j][i] = Moments{wmean, s.wait_var.value() / w + s.wait_mean_sq.value() / w - wmean * wmean};
    }
  }
  d.agent_delay.resize(n_agents);
  d.agent_wait.resize(n_agents);
  for (int i = 0; i < n_agents; ++i) {
    std::vector<double> weights(n_goods);
    std::vector<std::optional<Moments>> delay_parts(n_goods);
    std::vector<std::optional<Moments>> wait_parts(n_goods);
    for (int j = 0; j < n_goods; ++j) {
      weights[j] = r.theta[i][j];
      delay_parts[j] = d.pair_delay[j][i];
      wait_parts[j] = d.pair_wait[j][i];
    }
    d.agent_delay[i] = mixture(weights, delay_parts);
    d.agent_wait[i] = mixture(weights, wait_parts);
  }
  return out;
}

AnalyticResult analyze(const MatchingModel& model, const EnumerationOptions& options) {
  const int n_goods = model.good_count();
  const int n_agents = model.agent_count();
  const double total = model.total_rate();
  const auto sums = enumerate_terms(model, options, [&] { return MomentAccumulator(n_goods, n_agents, total); });
  return finalize(model, sums);
}

RateReport matching_rates(const MatchingModel& model, const EnumerationOptions& options) {
  return analyze(model, options).rates;
}

}  // namespace fcfs
