#include "fcfs/limits.hpp"

#include <cmath>
#include <exception>
#include <sstream>

namespace fcfs {

Grid light_traffic_theta(const MatchingModel& model) {
  Grid theta(model.agent_count(), std::vector<double>(model.good_count(), 0.0));
  for (int i = 0; i < model.agent_count(); ++i) {
    const double pool = model.mu_of(model.goods_of(i));
    for (int j = 0; j < model.good_count(); ++j) {
      if (model.compatible(j, i)) theta[i][j] = model.mu(j) / pool;
    }
  }
  return theta;
}

Grid light_traffic_rates(const MatchingModel& model) {
  const Grid theta = light_traffic_theta(model);
  Grid rates(model.good_count(), std::vector<double>(model.agent_count(), 0.0));
  for (int j = 0; j < model.good_count(); ++j) {
    for (int i = 0; i < model.agent_count(); ++i) rates[j][i] = model.alpha(i) * theta[i][j];
  }
  return rates;
}

std::vector<double> linear_grid(double lo, double hi, int steps) {
  if (steps < 1) throw Error(ErrorCode::DomainError, "grid needs at least one step");
  if (!(lo > 0.0 && lo <= hi && hi < 1.0)) throw Error(ErrorCode::DomainError, "grid requires 0 < rho_min <= rho_max < 1");
  if (steps == 1) return {lo};
  std::vector<double> grid(steps);
  for (int k = 0; k < steps; ++k) grid[k] = lo + (hi - lo) * k / (steps - 1);
  grid.back() = hi;
  return grid;
}

SweepSeries sweep(const MatchingModel& model, const std::vector<double>& rho_grid, const EnumerationOptions& options) {
  for (std::size_t k = 0; k < rho_grid.size(); ++k) {
    const double rho = rho_grid[k];
    if (!(rho > 0.0 && rho < 1.0)) throw Error(ErrorCode::DomainError, "grid points must lie in (0, 1)");
    if (k > 0 && !(rho > rho_grid[k - 1])) throw Error(ErrorCode::DomainError, "grid must be strictly increasing");
  }

  std::vector<MatchingModel> scaled;
  scaled.reserve(rho_grid.size());
  for (double rho : rho_grid) {
    MatchingModel m = model.with_rates(rho * model.mu_bar(), model.mu_bar());
    if (!check_stability(m).stable) throw UnstableGridPoint(rho, "model is unstable at this traffic intensity");
    // Surface near-instability and size errors before entering the parallel region.
    try {
      check_enumerable(m, options);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::UnstableModel) throw UnstableGridPoint(rho, e.what());
      throw;
    }
    scaled.push_back(std::move(m));
  }

  EnumerationOptions inner = options;
  inner.threads = 1;
  const auto count = static_cast<std::ptrdiff_t>(rho_grid.size());
  std::vector<SweepPoint> points(rho_grid.size());
  std::vector<std::exception_ptr> failures(rho_grid.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_count(options.threads))
  for (std::ptrdiff_t k = 0; k < count; ++k) {
    try {
      AnalyticResult result = analyze(scaled[k], inner);
      points[k] = SweepPoint{rho_grid[k], std::move(result.rates), std::move(result.delays)};
    } catch (...) {
      failures[k] = std::current_exception();
    }
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return SweepSeries{std::move(points)};
}

std::optional<double> mm1_wait(double lambda, double mu) {
  if (!(lambda < mu)) return std::nullopt;
  return 1.0 / (mu - lambda);
}

std::vector<DedicatedPair> dedicated_baseline(const MatchingModel& model, const std::vector<std::pair<int, int>>& pairing) {
  TypeSet goods_used = 0;
  TypeSet agents_used = 0;
  std::vector<DedicatedPair> out;
  out.reserve(pairing.size());
  for (const auto& [good, agent] : pairing) {
    if (good < 0 || good >= model.good_count() || agent < 0 || agent >= model.agent_count()) {
      throw Error(ErrorCode::UnknownIdentifier, "pairing index out of range");
    }
    if (!model.compatible(good, agent)) {
      throw Error(ErrorCode::DomainError, "(" + model.good_name(good) + ", " + model.agent_name(agent) + ") is not an edge");
    }
    if (contains(goods_used, good) || contains(agents_used, agent)) {
      throw Error(ErrorCode::DomainError, "pairing must be one-to-one");
    }
    goods_used |= single(good);
    agents_used |= single(agent);
    out.push_back(DedicatedPair{good, agent, mm1_wait(model.lambda(agent), model.mu(good))});
  }
  return out;
}

}  // namespace fcfs
