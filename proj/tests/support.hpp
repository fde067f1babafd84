#pragma once

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fcfs/model.hpp"

namespace testing {

inline fcfs::ModelSpec spec_of(std::vector<double> alpha, std::vector<double> beta,
                               const std::vector<std::pair<int, int>>& edges, double lambda_bar, double mu_bar) {
  fcfs::ModelSpec s;
  for (std::size_t i = 0; i < alpha.size(); ++i) s.agents.push_back({"c" + std::to_string(i + 1), alpha[i]});
  for (std::size_t j = 0; j < beta.size(); ++j) s.goods.push_back({"s" + std::to_string(j + 1), beta[j]});
  for (const auto& [good, agent] : edges) s.edges.emplace_back("s" + std::to_string(good + 1), "c" + std::to_string(agent + 1));
  s.lambda_bar = lambda_bar;
  s.mu_bar = mu_bar;
  return s;
}

inline fcfs::ModelSpec three_by_three_spec(double lambda_bar = 0.7) {
  return spec_of({0.3, 0.5, 0.2}, {0.3, 0.3, 0.4}, {{0, 0}, {0, 1}, {1, 0}, {1, 2}, {2, 1}, {2, 2}}, lambda_bar, 1.0);
}

inline fcfs::MatchingModel three_by_three(double lambda_bar = 0.7) {
  return fcfs::MatchingModel::build(three_by_three_spec(lambda_bar));
}

inline fcfs::MatchingModel single_pair(double lambda, double mu) {
  return fcfs::MatchingModel::build(spec_of({1.0}, {1.0}, {{0, 0}}, lambda, mu));
}

inline fcfs::MatchingModel disjoint_pairs(double lambda_bar) {
  return fcfs::MatchingModel::build(spec_of({0.5, 0.5}, {0.4, 0.6}, {{0, 0}, {1, 1}}, lambda_bar, 1.0));
}

inline std::vector<double> random_simplex(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.2, 1.0);
  std::vector<double> w(n);
  double total = 0.0;
  for (auto& x : w) total += (x = u(rng));
  double partial = 0.0;
  for (int k = 0; k + 1 < n; ++k) partial += (w[k] /= total);
  w[n - 1] = 1.0 - partial;
  return w;
}

/// Random valid model with every agent type connected and a random stable
/// load at most `load_cap` of the largest stable rho.
inline fcfs::MatchingModel random_model(std::mt19937_64& rng, int max_agents, int max_goods, double load_cap = 0.95) {
  std::uniform_int_distribution<int> ni(1, max_agents), nj(1, max_goods);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int I = ni(rng);
  const int J = nj(rng);
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < I; ++i) {
    bool any = false;
    for (int j = 0; j < J; ++j) {
      if (u(rng) < 0.45) {
        edges.emplace_back(j, i);
        any = true;
      }
    }
    if (!any) edges.emplace_back(std::uniform_int_distribution<int>(0, J - 1)(rng), i);
  }
  const double mu_bar = 0.5 + 1.5 * u(rng);
  auto spec = spec_of(random_simplex(rng, I), random_simplex(rng, J), edges, 1.0, mu_bar);
  const auto probe = fcfs::MatchingModel::build(spec);
  const double rho = (0.05 + (load_cap - 0.05) * u(rng)) * fcfs::max_stable_rho(probe).max_rho;
  spec.lambda_bar = rho * mu_bar;
  return fcfs::MatchingModel::build(spec);
}

}  // namespace testing
