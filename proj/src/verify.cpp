#include "fcfs/verify.hpp"

#include <cmath>

namespace fcfs {

std::vector<VerifyRow> compare(const MatchingModel& model, const AnalyticResult& analytic, const sim::SimStats& stats,
                               double min_pi, const EnumerationOptions& options) {
  const sim::SimEstimates e = sim::estimate(stats);
  const RateReport& r = analytic.rates;
  const DelayReport& d = analytic.delays;
  std::vector<VerifyRow> rows;
  auto add = [&rows](std::string name, double a, const sim::Estimate& x) {
    rows.push_back(VerifyRow{std::move(name), a, x.value, x.std_error});
  };
  auto add_opt = [&](std::string name, const std::optional<Moments>& m, bool mean, const std::optional<sim::Estimate>& x) {
    if (!m) return;
    add(std::move(name), mean ? m->mean : m->variance, x.value_or(sim::Estimate{}));
  };

  for (int j = 0; j < model.good_count(); ++j) {
    for (int i = 0; i < model.agent_count(); ++i) {
      if (!r.edge[j][i]) continue;
      add("rate:" + r.goods[j] + ":" + r.agents[i], r.rate[j][i], e.rate[j][i]);
    }
  }
  for (int j = 0; j < model.good_count(); ++j) add("loss:" + r.goods[j], r.loss[j], e.loss[j]);
  add("total_loss", r.total_loss(), e.total_loss);
  add("B", r.b, e.empty);

  for (int j = 0; j < model.good_count(); ++j) {
    for (int i = 0; i < model.agent_count(); ++i) {
      const std::string pair = r.goods[j] + ":" + r.agents[i];
      add_opt("delay_mean:" + pair, d.pair_delay[j][i], true, e.delay_mean[j][i]);
      add_opt("delay_var:" + pair, d.pair_delay[j][i], false, e.delay_var[j][i]);
      add_opt("wait_mean:" + pair, d.pair_wait[j][i], true, e.wait_mean[j][i]);
      add_opt("wait_var:" + pair, d.pair_wait[j][i], false, e.wait_var[j][i]);
    }
  }
  for (int i = 0; i < model.agent_count(); ++i) {
    const std::string& a = r.agents[i];
    add_opt("agent_delay_mean:" + a, d.agent_delay[i], true, e.agent_delay_mean[i]);
    add_opt("agent_delay_var:" + a, d.agent_delay[i], false, e.agent_delay_var[i]);
    add_opt("agent_wait_mean:" + a, d.agent_wait[i], true, e.agent_wait_mean[i]);
    add_opt("agent_wait_var:" + a, d.agent_wait[i], false, e.agent_wait_var[i]);
  }

  for (const auto& o : pi_y_table(model, min_pi, options)) {
    std::string name = "pi_y:";
    for (std::size_t l = 0; l < o.order.size(); ++l) name += (l ? ">" : "") + model.agent_name(o.order[l]);
    const auto it = e.pi_y.find(sim::encode_order(o.order, model.agent_count()));
    add(std::move(name), o.probability, it == e.pi_y.end() ? sim::Estimate{} : it->second);
  }
  return rows;
}

double max_abs_z(const std::vector<VerifyRow>& rows) {
  double worst = 0.0;
  for (const auto& r : rows) worst = std::max(worst, std::abs(r.z_score()));
  return worst;
}

}  // namespace fcfs
