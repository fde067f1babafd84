#include "fcfs/reference.hpp"

#include <algorithm>

namespace fcfs::reference {

namespace {

struct Sums {
  double x = 0.0;
  double e = 0.0;
  double e2 = 0.0;
  double v = 0.0;
  double we = 0.0;
  double we2 = 0.0;
  double wv = 0.0;
};

std::optional<Moments> blend(const MatchingModel& model, const RateReport& r, const MomentGrid& grid, int i) {
  double served = 0.0;
  for (int j = 0; j < model.good_count(); ++j) served += r.rate[j][i];
  if (!(served > 0.0)) return std::nullopt;
  double mean = 0.0;
  double second = 0.0;
  for (int j = 0; j < model.good_count(); ++j) {
    if (!grid[j][i]) continue;
    const double w = r.rate[j][i] / served;
    mean += w * grid[j][i]->mean;
    second += w * (grid[j][i]->variance + grid[j][i]->mean * grid[j][i]->mean);
  }
  return Moments{mean, second - mean * mean};
}

}  // namespace

AnalyticResult analyze(const MatchingModel& model, int max_types) {
  const int n_agents = model.agent_count();
  const int n_goods = model.good_count();
  if (n_agents > max_types) throw Error(ErrorCode::TooManyTypes, "too many agent types for the reference pass");
  if (!check_stability(model).stable) throw Error(ErrorCode::UnstableModel, "model is unstable");
  const double total = model.total_rate();

  std::vector<Sums> acc(static_cast<std::size_t>(n_goods) * n_agents);
  double weight_total = 0.0;

  for (TypeSet mask = 1; mask <= full_set(n_agents); ++mask) {
    std::vector<int> order = members(mask);
    do {
      const int k = static_cast<int>(order.size());
      std::vector<double> gap(k);
      std::vector<TypeSet> fresh(k);
      double x = 1.0;
      TypeSet prefix = 0;
      TypeSet seen_goods = 0;
      for (int l = 0; l < k; ++l) {
        prefix |= single(order[l]);
        const TypeSet goods = compatible_goods(model, prefix);
        fresh[l] = goods & ~seen_goods;
        seen_goods = goods;
        gap[l] = model.mu_of(goods) - model.lambda_of(prefix);
        x *= model.lambda(order[l]) / gap[l];
      }
      weight_total += x;
      for (int j = 0; j < n_goods; ++j) {
        int l = 0;
        while (l < k && !contains(fresh[l], j)) ++l;
        if (l == k) continue;
        double e = 0.0, v = 0.0, we = 0.0, wv = 0.0;
        for (int h = l; h < k; ++h) {
          const double p = gap[h] / total;
          e += 1.0 / p;
          v += (1.0 - p) / (p * p);
          we += 1.0 / gap[h];
          wv += 1.0 / (gap[h] * gap[h]);
        }
        Sums& s = acc[j * n_agents + order[l]];
        s.x += x;
        s.e += x * e;
        s.e2 += x * e * e;
        s.v += x * v;
        s.we += x * we;
        s.we2 += x * we * we;
        s.wv += x * wv;
      }
    } while (std::next_permutation(order.begin(), order.end()));
  }

  AnalyticResult out;
  RateReport& r = out.rates;
  r.goods = model.good_names();
  r.agents = model.agent_names();
  r.edge.assign(n_goods, std::vector<bool>(n_agents, false));
  r.b = 1.0 / (1.0 + weight_total);
  r.rate.assign(n_goods, std::vector<double>(n_agents, 0.0));
  r.loss.assign(n_goods, 0.0);
  r.eta.assign(n_goods, std::vector<double>(n_agents, 0.0));
  r.eta_lost.assign(n_goods, 0.0);
  r.theta.assign(n_agents, std::vector<double>(n_goods, 0.0));
  for (int j = 0; j < n_goods; ++j) {
    const double share = model.mu(j) / model.mu_bar();
    double matched = 0.0;
    for (int i = 0; i < n_agents; ++i) {
      r.edge[j][i] = model.compatible(j, i);
      r.rate[j][i] = r.b * share * acc[j * n_agents + i].x;
      matched += r.rate[j][i];
    }
    r.loss[j] = share - matched;
    for (int i = 0; i < n_agents; ++i) r.eta[j][i] = r.rate[j][i] / share;
    r.eta_lost[j] = r.loss[j] / share;
  }
  for (int i = 0; i < n_agents; ++i) {
    double served = 0.0;
    for (int j = 0; j < n_goods; ++j) served += r.rate[j][i];
    for (int j = 0; j < n_goods; ++j) r.theta[i][j] = served > 0.0 ? r.rate[j][i] / served : 0.0;
  }

  DelayReport& d = out.delays;
  d.goods = r.goods;
  d.agents = r.agents;
  d.pair_delay.assign(n_goods, std::vector<std::optional<Moments>>(n_agents));
  d.pair_wait.assign(n_goods, std::vector<std::optional<Moments>>(n_agents));
  for (int j = 0; j < n_goods; ++j) {
    for (int i = 0; i < n_agents; ++i) {
      const Sums& s = acc[j * n_agents + i];
      if (!r.edge[j][i] || !(s.x > 0.0)) continue;
      // E = B * (1/r) * (mu_j / mu_bar) * acc_E reduces to acc_E / acc_X.
      const double scale = r.b * model.mu(j) / model.mu_bar() / r.rate[j][i];
      const double mean = scale * s.e;
      d.pair_delay[j][i] = Moments{mean, scale * s.v + scale * s.e2 - mean * mean};
      const double wmean = scale * s.we;
      d.pair_wait[j][i] = Moments{wmean, scale * s.wv + scale * s.we2 - wmean * wmean};
    }
  }
  d.agent_delay.resize(n_agents);
  d.agent_wait.resize(n_agents);
  for (int i = 0; i < n_agents; ++i) {
    d.agent_delay[i] = blend(model, r, d.pair_delay, i);
    d.agent_wait[i] = blend(model, r, d.pair_wait, i);
  }
  return out;
}

}  // namespace fcfs::reference
