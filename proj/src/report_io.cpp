#include "fcfs/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace fcfs {

namespace {

nlohmann::json moments_json(const std::optional<Moments>& m) {
  if (!m) return nullptr;
  return {{"mean", m->mean}, {"variance", m->variance}, {"stddev", m->stddev()}};
}

const MomentGrid& pick_pairs(const DelayReport& r, bool waits) { return waits ? r.pair_wait : r.pair_delay; }

const std::vector<std::optional<Moments>>& pick_agents(const DelayReport& r, bool waits) {
  return waits ? r.agent_wait : r.agent_delay;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
  return buf;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

nlohmann::json to_json(const RateReport& r) {
  nlohmann::json rates = nlohmann::json::object();
  nlohmann::json eta = nlohmann::json::object();
  nlohmann::json loss = nlohmann::json::object();
  for (int j = 0; j < r.good_count(); ++j) {
    nlohmann::json row = nlohmann::json::object();
    nlohmann::json erow = nlohmann::json::object();
    for (int i = 0; i < r.agent_count(); ++i) {
      if (!r.edge[j][i]) continue;
      row[r.agents[i]] = r.rate[j][i];
      erow[r.agents[i]] = r.eta[j][i];
    }
    erow["LOST"] = r.eta_lost[j];
    rates[r.goods[j]] = row;
    eta[r.goods[j]] = erow;
    loss[r.goods[j]] = r.loss[j];
  }
  nlohmann::json theta = nlohmann::json::object();
  for (int i = 0; i < r.agent_count(); ++i) {
    nlohmann::json row = nlohmann::json::object();
    for (int j = 0; j < r.good_count(); ++j) {
      if (r.edge[j][i]) row[r.goods[j]] = r.theta[i][j];
    }
    theta[r.agents[i]] = row;
  }
  return {{"b", r.b}, {"rates", rates}, {"loss", loss}, {"total_loss", r.total_loss()}, {"eta", eta}, {"theta", theta}};
}

nlohmann::json to_json(const DelayReport& r, bool waits) {
  const auto& pairs = pick_pairs(r, waits);
  const auto& agents = pick_agents(r, waits);
  nlohmann::json pj = nlohmann::json::object();
  for (std::size_t j = 0; j < r.goods.size(); ++j) {
    nlohmann::json row = nlohmann::json::object();
    for (std::size_t i = 0; i < r.agents.size(); ++i) {
      if (pairs[j][i]) row[r.agents[i]] = moments_json(pairs[j][i]);
    }
    pj[r.goods[j]] = row;
  }
  nlohmann::json aj = nlohmann::json::object();
  for (std::size_t i = 0; i < r.agents.size(); ++i) aj[r.agents[i]] = moments_json(agents[i]);
  return {{"kind", waits ? "wait" : "delay"}, {"pairs", pj}, {"agents", aj}};
}

nlohmann::json to_json(const SweepSeries& series) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : series.points) {
    points.push_back({{"rho", p.rho}, {"rates", to_json(p.rates)}, {"delays", to_json(p.delays, false)}});
  }
  return {{"points", points}};
}

nlohmann::json sim_to_json(const MatchingModel& model, const sim::SimStats& stats) {
  const sim::BatchCounters t = stats.totals();
  const sim::SimEstimates e = sim::estimate(stats);
  auto est = [](const sim::Estimate& x) { return nlohmann::json{{"value", x.value}, {"stderr", x.std_error}}; };
  auto opt = [&](const std::optional<sim::Estimate>& x) -> nlohmann::json {
    if (!x) return nullptr;
    return est(*x);
  };

  nlohmann::json rates = nlohmann::json::object();
  nlohmann::json delays = nlohmann::json::object();
  nlohmann::json waits = nlohmann::json::object();
  nlohmann::json loss = nlohmann::json::object();
  for (int j = 0; j < stats.n_goods; ++j) {
    nlohmann::json rr = nlohmann::json::object(), dr = nlohmann::json::object(), wr = nlohmann::json::object();
    for (int i = 0; i < stats.n_agents; ++i) {
      if (!model.compatible(j, i)) continue;
      const auto& a = model.agent_name(i);
      rr[a] = est(e.rate[j][i]);
      dr[a] = {{"mean", opt(e.delay_mean[j][i])}, {"variance", opt(e.delay_var[j][i])}};
      wr[a] = {{"mean", opt(e.wait_mean[j][i])}, {"variance", opt(e.wait_var[j][i])}};
    }
    const auto& g = model.good_name(j);
    rates[g] = rr;
    delays[g] = dr;
    waits[g] = wr;
    loss[g] = est(e.loss[j]);
  }
  nlohmann::json agents = nlohmann::json::object();
  for (int i = 0; i < stats.n_agents; ++i) {
    agents[model.agent_name(i)] = {{"delay_mean", opt(e.agent_delay_mean[i])},
                                   {"delay_variance", opt(e.agent_delay_var[i])},
                                   {"wait_mean", opt(e.agent_wait_mean[i])},
                                   {"wait_variance", opt(e.agent_wait_var[i])}};
  }
  nlohmann::json pi_y = nlohmann::json::array();
  for (const auto& [code, x] : e.pi_y) {
    nlohmann::json order = nlohmann::json::array();
    for (int t : sim::decode_order(code, stats.n_agents)) order.push_back(model.agent_name(t));
    pi_y.push_back({{"order", order}, {"value", x.value}, {"stderr", x.std_error}});
  }
  return {{"events", t.events},
          {"goods", t.goods},
          {"agents", t.agents},
          {"batches", stats.batches.size()},
          {"min_delay", stats.min_delay},
          {"final_unmatched", stats.final_unmatched},
          {"empty_fraction", est(e.empty)},
          {"total_loss", est(e.total_loss)},
          {"rates", rates},
          {"loss", loss},
          {"delays", delays},
          {"waits", waits},
          {"agent_moments", agents},
          {"pi_y", pi_y}};
}

std::string rates_csv(const RateReport& r) {
  std::ostringstream out;
  out << "good,agent,rate\n";
  for (int j = 0; j < r.good_count(); ++j) {
    for (int i = 0; i < r.agent_count(); ++i) {
      if (r.edge[j][i]) out << r.goods[j] << ',' << r.agents[i] << ',' << format_number(r.rate[j][i]) << '\n';
    }
  }
  for (int j = 0; j < r.good_count(); ++j) out << r.goods[j] << ",LOST," << format_number(r.loss[j]) << '\n';
  return out.str();
}

std::string delays_csv(const DelayReport& r, bool waits) {
  const auto& pairs = pick_pairs(r, waits);
  const auto& agents = pick_agents(r, waits);
  std::ostringstream out;
  out << "good,agent,mean,variance\n";
  for (std::size_t j = 0; j < r.goods.size(); ++j) {
    for (std::size_t i = 0; i < r.agents.size(); ++i) {
      if (!pairs[j][i]) continue;
      out << r.goods[j] << ',' << r.agents[i] << ',' << format_number(pairs[j][i]->mean) << ','
          << format_number(pairs[j][i]->variance) << '\n';
    }
  }
  out << "\nagent,mean,variance\n";
  for (std::size_t i = 0; i < r.agents.size(); ++i) {
    if (!agents[i]) continue;
    out << r.agents[i] << ',' << format_number(agents[i]->mean) << ',' << format_number(agents[i]->variance) << '\n';
  }
  return out.str();
}

std::string sweep_csv(const SweepSeries& series) {
  std::ostringstream out;
  out << "rho,good,agent,rate,delay_mean,delay_var\n";
  for (const auto& p : series.points) {
    const auto rho = format_number(p.rho);
    for (int j = 0; j < p.rates.good_count(); ++j) {
      for (int i = 0; i < p.rates.agent_count(); ++i) {
        if (!p.rates.edge[j][i]) continue;
        out << rho << ',' << p.rates.goods[j] << ',' << p.rates.agents[i] << ',' << format_number(p.rates.rate[j][i]) << ',';
        if (const auto& m = p.delays.pair_delay[j][i]) out << format_number(m->mean) << ',' << format_number(m->variance);
        else out << ',';
        out << '\n';
      }
    }
    for (int j = 0; j < p.rates.good_count(); ++j) {
      out << rho << ',' << p.rates.goods[j] << ",LOST," << format_number(p.rates.loss[j]) << ",,\n";
    }
  }
  return out.str();
}

std::string rates_table(const RateReport& r) {
  constexpr std::size_t w = 10;
  std::ostringstream out;
  out << pad("", w);
  for (const auto& a : r.agents) out << pad(a, w);
  out << pad("LOST", w) << '\n';
  for (int j = 0; j < r.good_count(); ++j) {
    out << pad(r.goods[j], w);
    for (int i = 0; i < r.agent_count(); ++i) out << pad(r.edge[j][i] ? fixed(r.rate[j][i], 3) : "-", w);
    out << pad(fixed(r.loss[j], 3), w) << '\n';
  }
  out << "B = " << format_number(r.b) << '\n';
  return out.str();
}

std::string delays_table(const DelayReport& r, bool waits) {
  constexpr std::size_t w = 10;
  const auto& pairs = pick_pairs(r, waits);
  const auto& agents = pick_agents(r, waits);
  const char sym = waits ? 'W' : 'L';
  std::ostringstream out;
  for (const char* what : {"E", "sd"}) {
    out << what << '(' << sym << ")\n" << pad("", w);
    for (const auto& a : r.agents) out << pad(a, w);
    out << '\n';
    for (std::size_t j = 0; j < r.goods.size(); ++j) {
      out << pad(r.goods[j], w);
      for (std::size_t i = 0; i < r.agents.size(); ++i) {
        const auto& m = pairs[j][i];
        out << pad(m ? fixed(what[0] == 'E' ? m->mean : m->stddev(), 2) : "-", w);
      }
      out << '\n';
    }
  }
  out << "per agent\n";
  for (std::size_t i = 0; i < r.agents.size(); ++i) {
    if (!agents[i]) continue;
    out << pad(r.agents[i], w) << "E=" << fixed(agents[i]->mean, 2) << "  sd=" << fixed(agents[i]->stddev(), 2) << '\n';
  }
  return out.str();
}

double VerifyRow::z_score() const {
  const double diff = empirical - analytic;
  if (diff == 0.0) return 0.0;
  if (!(std_error > 0.0)) return std::copysign(std::numeric_limits<double>::infinity(), diff);
  return diff / std_error;
}

std::string verify_csv(const std::vector<VerifyRow>& rows) {
  std::ostringstream out;
  out << "quantity,analytic,empirical,stderr,z_score\n";
  for (const auto& r : rows) {
    out << r.quantity << ',' << format_number(r.analytic) << ',' << format_number(r.empirical) << ','
        << format_number(r.std_error) << ',' << format_number(r.z_score()) << '\n';
  }
  return out.str();
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> cells;
    if (!line.empty()) {
      std::size_t start = 0;
      while (true) {
        const auto comma = line.find(',', start);
        cells.push_back(line.substr(start, comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    }
    rows.push_back(std::move(cells));
  }
  return rows;
}

}  // namespace fcfs
