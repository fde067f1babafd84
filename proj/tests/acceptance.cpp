// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run every criterion
//   acceptance 3 7        run the listed criteria
//
// Exit status is 0 iff every selected criterion passes.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fcfs/analytic.hpp"
#include "fcfs/delays.hpp"
#include "fcfs/detailed.hpp"
#include "fcfs/limits.hpp"
#include "fcfs/simulator.hpp"
#include "fcfs/verify.hpp"
#include "oracle/xchain.hpp"
#include "support.hpp"

using namespace fcfs;

namespace {

// Tolerances, as stated by the acceptance criteria.
constexpr double kRateTol = 0.0005;
constexpr double kDelayTol = 0.005;
constexpr double kIdentityTol = 1e-9;
constexpr double kClosedFormTol = 1e-12;
constexpr double kSigmas = 3.0;
constexpr double kChiAlpha = 0.01;
constexpr int kChiMaxFailures = 2;
constexpr double kTransformTol = 1e-12;
constexpr double kDerivativeTol = 1e-4;
constexpr double kLightTol = 0.005;
constexpr double kHeavyLoss = 0.002;
constexpr double kCauchyTol = 0.01;
constexpr double kOracleTol = 1e-6;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (!pass) detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string pair_name(int j, int i) { return "(s" + std::to_string(j + 1) + ",c" + std::to_string(i + 1) + ")"; }

// 1. Tabulated rate table at rho = 0.7.
void rate_table(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto r = matching_rates(testing::three_by_three());
  const double elapsed = seconds_since(t0);
  const double rate[3][3] = {{0.090, 0.139, 0}, {0.120, 0, 0.067}, {0, 0.211, 0.073}};
  const double lost[3] = {0.071, 0.113, 0.116};
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      if (rate[j][i] == 0) continue;
      o.require(std::abs(r.rate[j][i] - rate[j][i]) <= kRateTol,
                "r" + pair_name(j, i) + "=" + num(r.rate[j][i]) + " vs " + num(rate[j][i]));
    }
    o.require(std::abs(r.loss[j] - lost[j]) <= kRateTol, "loss s" + std::to_string(j + 1) + "=" + num(r.loss[j]));
  }
  o.require(elapsed < 1.0, "runtime " + num(elapsed) + " s");
  if (o.pass) o.detail << "9 values within " << kRateTol << ", " << num(elapsed * 1e3, 3) << " ms";
}

// 2. Tabulated delay tables.
void delay_tables(Outcome& o) {
  const auto d = delay_moments(testing::three_by_three());
  const double mean[3][3] = {{7.63, 7.64, 0}, {7.14, 0, 6.38}, {0, 7.40, 6.45}};
  const double sd[3][3] = {{6.14, 6.30, 0}, {5.97, 0, 5.41}, {0, 6.21, 5.46}};
  const double agent[3] = {7.35, 7.50, 6.38};
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      if (mean[j][i] == 0) continue;
      const auto& m = *d.pair_delay[j][i];
      o.require(std::abs(m.mean - mean[j][i]) <= kDelayTol,
                "E(L" + pair_name(j, i) + ")=" + num(m.mean, 5) + " vs " + num(mean[j][i], 3));
      o.require(std::abs(m.stddev() - sd[j][i]) <= kDelayTol,
                "sd(L" + pair_name(j, i) + ")=" + num(m.stddev(), 5) + " vs " + num(sd[j][i], 3));
    }
  }
  for (int i = 0; i < 3; ++i) {
    o.require(std::abs(d.agent_delay[i]->mean - agent[i]) <= kDelayTol,
              "E(L_c" + std::to_string(i + 1) + ")=" + num(d.agent_delay[i]->mean, 5));
  }
  if (o.pass) o.detail << "12 pair entries and 3 agent means within " << kDelayTol;
}

// 3. Tabulated agent wait means.
void wait_list(Outcome& o) {
  const auto d = wait_moments(testing::three_by_three());
  const double tabulated[3] = {4.33, 4.41, 3.75};
  for (int i = 0; i < 3; ++i) {
    o.require(std::abs(d.agent_wait[i]->mean - tabulated[i]) <= kDelayTol,
              "E(W_c" + std::to_string(i + 1) + ")=" + num(d.agent_wait[i]->mean, 5));
  }
  if (o.pass) {
    o.detail << "E(W) = (" << num(d.agent_wait[0]->mean, 4) << ", " << num(d.agent_wait[1]->mean, 4) << ", "
             << num(d.agent_wait[2]->mean, 4) << ")";
  }
}

// 4. Rate identities on random stable models.
void identity_suite(Outcome& o) {
  std::mt19937_64 rng(20240601);
  const int models = 25;
  double worst = 0.0;
  for (int t = 0; t < models; ++t) {
    const auto m = testing::random_model(rng, 6, 6);
    const auto r = matching_rates(m);
    worst = std::max(worst, std::abs(r.total_matched() + r.total_loss() - 1.0));
    worst = std::max(worst, std::abs(r.total_loss() - (m.mu_bar() - m.lambda_bar()) / m.mu_bar()));
    for (int i = 0; i < m.agent_count(); ++i) {
      double s = 0.0;
      for (int j = 0; j < m.good_count(); ++j) s += r.rate[j][i];
      worst = std::max(worst, std::abs(s - m.lambda(i) / m.mu_bar()));
    }
  }
  o.require(worst <= kIdentityTol, "worst identity error " + num(worst));
  if (o.pass) o.detail << models << " models, worst error " << num(worst, 3);
}

// 5. Single pair against M/M/1.
void single_pair(Outcome& o) {
  double worst = 0.0;
  for (const auto& [lambda, mu] : std::vector<std::pair<double, double>>{{0.5, 1}, {0.9, 1}, {0.1, 2}, {3, 4}, {0.99, 1}}) {
    const auto m = testing::single_pair(lambda, mu);
    const auto a = analyze(m);
    auto rel = [](double x, double y) { return std::abs(x - y) / std::abs(y); };
    worst = std::max(worst, std::abs(a.rates.b - (mu - lambda) / mu));
    worst = std::max(worst, rel(a.delays.pair_delay[0][0]->mean, (lambda + mu) / (mu - lambda)));
    worst = std::max(worst, rel(a.delays.pair_wait[0][0]->mean, 1.0 / (mu - lambda)));
  }
  o.require(worst <= kClosedFormTol, "worst error " + num(worst));
  if (o.pass) o.detail << "5 load points, worst error " << num(worst, 3);
}

// 6. Monte Carlo equivalence for the 3x3 model.
void monte_carlo(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto m = testing::three_by_three();
  sim::SimOptions opt;
  opt.n_events = 10'000'000;
  opt.seed = 1;
  const auto analytic = analyze(m);
  const auto rows = compare(m, analytic, sim::run(m, opt), 1e-4);
  const double elapsed = seconds_since(t0);
  int outside = 0;
  for (const auto& r : rows) {
    if (std::abs(r.z_score()) > kSigmas) {
      ++outside;
      o.require(false, r.quantity + " z=" + num(r.z_score(), 3));
    }
  }
  o.require(elapsed < 60.0, "runtime " + num(elapsed) + " s");
  if (o.pass) o.detail << rows.size() << " quantities, max |z| " << num(max_abs_z(rows), 3) << ", " << num(elapsed, 3) << " s";
}

// 7. Reversibility of the exchanged sequence.
void reversibility(Outcome& o) {
  const auto m = testing::three_by_three();
  int chi_failures = 0;
  std::int64_t pairs = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto r = sim::verify_reversibility(m, 100'000, seed);
    pairs += r.pairs_checked;
    o.require(r.coincide(), "seed " + std::to_string(seed) + ": " + std::to_string(r.pairs_coinciding) + "/" +
                                std::to_string(r.pairs_checked) + " pairs");
    if (r.p_value < kChiAlpha) ++chi_failures;
  }
  o.require(chi_failures <= kChiMaxFailures, std::to_string(chi_failures) + " chi-square failures");
  if (o.pass) o.detail << pairs << " pairs coincide, " << chi_failures << "/20 chi-square failures";
}

sim::UState random_inadmissible(const MatchingModel& m, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(1, 12), agent(0, m.agent_count() - 1), good(0, m.good_count() - 1), kind(0, 2);
  sim::UState u;
  const int n = len(rng);
  u.push_back({sim::Mark::Unmatched, agent(rng)});
  for (int k = 1; k < n; ++k) {
    switch (kind(rng)) {
      case 0: u.push_back({sim::Mark::Unmatched, agent(rng)}); break;
      case 1: u.push_back({sim::Mark::ExchangedAgent, agent(rng)}); break;
      default: u.push_back({sim::Mark::ExchangedGood, good(rng)}); break;
    }
  }
  std::uniform_int_distribution<std::size_t> pos(0, u.size() - 1);
  switch (kind(rng)) {
    case 0: {
      // Does not start with an unmatched agent.
      const bool as_agent = kind(rng) == 0;
      u.front() = as_agent ? sim::UItem{sim::Mark::ExchangedAgent, agent(rng)} : sim::UItem{sim::Mark::ExchangedGood, good(rng)};
      break;
    }
    case 1:
      // Contains an unexchanged good.
      u.insert(u.begin() + 1 + static_cast<std::ptrdiff_t>(pos(rng)), sim::UItem{sim::Mark::Good, good(rng)});
      break;
    default: {
      // An unmatched agent ahead of a compatible exchanged good.
      const int j = good(rng);
      int i = agent(rng);
      while (!m.compatible(j, i)) i = agent(rng);
      const auto at = 1 + static_cast<std::ptrdiff_t>(pos(rng));
      u.insert(u.begin() + at, sim::UItem{sim::Mark::ExchangedGood, j});
      u.insert(u.begin() + std::uniform_int_distribution<std::ptrdiff_t>(0, at)(rng), sim::UItem{sim::Mark::Unmatched, i});
      break;
    }
  }
  return u;
}

// 8. Admissibility of detailed states.
void admissibility(Outcome& o) {
  const auto m = testing::three_by_three();
  sim::SimOptions opt;
  opt.n_events = 1'000'000;
  opt.burn_in = 0;
  opt.seed = 8;
  sim::DetailedTracker tracker(m);
  std::uint64_t bad = 0;
  std::size_t longest = 0;
  sim::run(m, opt, [&](const sim::StepView& v) {
    tracker.observe(v.index, v.item, v.event);
    if (!tracker.admissible()) ++bad;
    longest = std::max(longest, tracker.size());
  });
  o.require(bad == 0, std::to_string(bad) + " simulated states rejected");

  std::mt19937_64 rng(88);
  int accepted = 0;
  for (int k = 0; k < 1000; ++k) accepted += sim::is_admissible(m, random_inadmissible(m, rng));
  o.require(accepted == 0, std::to_string(accepted) + " inadmissible states accepted");
  if (o.pass) o.detail << "10^6 steps admissible (longest U " << longest << "), 1000/1000 inadmissible rejected";
}

// 9. PGF and MGF normalization and derivatives.
void transforms(Outcome& o) {
  const auto m = testing::three_by_three();
  const auto d = delay_moments(m);
  double worst_norm = 0.0, worst_slope = 0.0;
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      if (!m.compatible(j, i)) continue;
      worst_norm = std::max(worst_norm, std::abs(delay_pgf(m, j, i, 1.0) - 1.0));
      worst_norm = std::max(worst_norm, std::abs(wait_mgf(m, j, i, 0.0) - 1.0));
      const double h = 1e-6;
      const double g = (delay_pgf(m, j, i, 1.0) - delay_pgf(m, j, i, 1.0 - h)) / h;
      worst_slope = std::max(worst_slope, std::abs(g / d.pair_delay[j][i]->mean - 1.0));
      const double k = 1e-8;
      const double w = (wait_mgf(m, j, i, k) - 1.0) / k;
      worst_slope = std::max(worst_slope, std::abs(w / d.pair_wait[j][i]->mean - 1.0));
    }
  }
  o.require(worst_norm <= kTransformTol, "normalization error " + num(worst_norm));
  o.require(worst_slope <= kDerivativeTol, "derivative error " + num(worst_slope));
  if (o.pass) o.detail << "normalization " << num(worst_norm, 3) << ", derivative " << num(worst_slope, 3);
}

// 10. Light traffic, monotone sweep, heavy-traffic loss.
void limit_checks(Outcome& o) {
  const auto m = testing::three_by_three();
  const auto light = matching_rates(m.with_rates(0.001, 1.0));
  const auto limit = light_traffic_theta(m);
  double worst = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (m.compatible(j, i)) worst = std::max(worst, std::abs(light.theta[i][j] / limit[i][j] - 1.0));
    }
  }
  o.require(worst <= kLightTol, "light-traffic deviation " + num(worst));
  // Monotonicity is read on rates per matched pair, r / rho: raw rates vanish at rho -> 0.
  const auto s = sweep(m, linear_grid(0.1, 0.9, 17));
  for (std::size_t k = 1; k < s.points.size(); ++k) {
    const auto& now = s.points[k];
    const auto& before = s.points[k - 1];
    o.require(now.rates.rate[0][1] / now.rho <= before.rates.rate[0][1] / before.rho,
              "r(s1,c2)/rho rises at rho=" + num(now.rho));
    o.require(now.rates.rate[2][1] / now.rho >= before.rates.rate[2][1] / before.rho,
              "r(s3,c2)/rho falls at rho=" + num(now.rho));
  }
  const double loss = matching_rates(m.with_rates(0.999, 1.0)).total_loss();
  o.require(loss < kHeavyLoss, "loss at 0.999 = " + num(loss));
  if (o.pass) o.detail << "light deviation " << num(worst, 3) << ", 17-point sweep monotone, loss(0.999) " << num(loss, 3);
}

// 11. Cauchy proxy for the heavy-traffic limit.
void heavy_traffic(Outcome& o) {
  const auto m = testing::three_by_three();
  const auto a = matching_rates(m.with_rates(0.99, 1.0));
  const auto b = matching_rates(m.with_rates(0.999, 1.0));
  double worst = 0.0, per_match = 0.0;
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      if (!m.compatible(j, i)) continue;
      worst = std::max(worst, std::abs(a.rate[j][i] / b.rate[j][i] - 1.0));
      per_match = std::max(per_match, std::abs((a.rate[j][i] / 0.99) / (b.rate[j][i] / 0.999) - 1.0));
    }
  }
  o.require(worst < kCauchyTol, "relative change " + num(worst));
  o.detail << (o.pass ? "largest relative change " + num(worst, 3) + ", " : ", ")
           << "per matched pair (r/rho) " << num(per_match, 3);
}

// 12. Truncated list-chain oracle on every connected 2x2 graph.
void brute_force(Outcome& o) {
  const std::vector<std::vector<std::pair<int, int>>> graphs{
      {{0, 0}, {0, 1}, {1, 0}, {1, 1}}, {{0, 1}, {1, 0}, {1, 1}}, {{0, 0}, {1, 0}, {1, 1}},
      {{0, 0}, {0, 1}, {1, 1}},         {{0, 0}, {0, 1}, {1, 0}},
  };
  std::mt19937_64 rng(1212);
  double worst = 0.0;
  int cases = 0;
  for (const auto& g : graphs) {
    for (int v = 0; v < 3; ++v) {
      auto m = MatchingModel::build(
          testing::spec_of(testing::random_simplex(rng, 2), testing::random_simplex(rng, 2), g, 0.5, 1.0));
      m = m.with_rates(m.lambda_bar() * 0.3 / oracle::max_subset_load(m), m.mu_bar());
      const auto exact = matching_rates(m);
      const auto brute = oracle::solve_xchain(m, 18);
      for (int j = 0; j < 2; ++j) {
        worst = std::max(worst, std::abs(brute.loss[j] - exact.loss[j]));
        for (int i = 0; i < 2; ++i) worst = std::max(worst, std::abs(brute.rate[j][i] - exact.rate[j][i]));
      }
      ++cases;
    }
  }
  o.require(worst <= kOracleTol, "worst deviation " + num(worst));
  if (o.pass) o.detail << cases << " models, worst deviation " << num(worst, 3);
}

struct Criterion {
  int id;
  const char* title;
  std::function<void(Outcome&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "3x3 rate table", rate_table},
      {2, "3x3 delay tables", delay_tables},
      {3, "3x3 wait means", wait_list},
      {4, "identity suite", identity_suite},
      {5, "single-pair closed forms", single_pair},
      {6, "Monte Carlo equivalence", monte_carlo},
      {7, "reversibility", reversibility},
      {8, "admissibility", admissibility},
      {9, "PGF/MGF checks", transforms},
      {10, "limit checks", limit_checks},
      {11, "heavy-traffic proxy", heavy_traffic},
      {12, "brute-force oracle", brute_force},
  };
  std::vector<int> selected;
  for (int k = 1; k < argc; ++k) selected.push_back(std::atoi(argv[k]));

  bool all_pass = true;
  for (const auto& c : all) {
    if (!selected.empty() && std::find(selected.begin(), selected.end(), c.id) == selected.end()) continue;
    Outcome o;
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::printf("criterion %2d %-26s %s  %s\n", c.id, c.title, o.pass ? "PASS" : "FAIL", o.detail.str().c_str());
    all_pass = all_pass && o.pass;
  }
  return all_pass ? 0 : 1;
}
