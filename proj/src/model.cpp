#include "fcfs/model.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>

namespace fcfs {

namespace {

constexpr double kFrequencySumTolerance = 1e-12;
// 2^30 subsets is already far beyond anything the enumeration can handle.
constexpr int kMaxSubsetTypes = 30;

template <class T>
int find_index(const std::vector<T>& items, std::string_view name) {
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (items[k].name == name) return static_cast<int>(k);
  }
  return -1;
}

void require_subset_enumerable(int count) {
  if (count > kMaxSubsetTypes) {
    throw Error(ErrorCode::TooManyTypes,
                "subset enumeration over " + std::to_string(count) + " agent types is not supported");
  }
}

}  // namespace

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::UnknownIdentifier: return "UnknownIdentifier";
    case ErrorCode::DuplicateType: return "DuplicateType";
    case ErrorCode::UnstableModel: return "UnstableModel";
    case ErrorCode::TooManyTypes: return "TooManyTypes";
    case ErrorCode::ZeroRate: return "ZeroRate";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::UnstableGridPoint: return "UnstableGridPoint";
    case ErrorCode::OpenWindow: return "OpenWindow";
  }
  return "Unknown";
}

const char* to_string(IssueKind kind) noexcept {
  switch (kind) {
    case IssueKind::FrequencySumError: return "FrequencySumError";
    case IssueKind::NonPositiveFrequency: return "NonPositiveFrequency";
    case IssueKind::UnknownIdentifier: return "UnknownIdentifier";
    case IssueKind::DuplicateIdentifier: return "DuplicateIdentifier";
    case IssueKind::IsolatedAgentType: return "IsolatedAgentType";
    case IssueKind::NonPositiveRate: return "NonPositiveRate";
    case IssueKind::TooManyTypes: return "TooManyTypes";
  }
  return "Unknown";
}

UnstableGridPoint::UnstableGridPoint(double rho, const std::string& detail)
    : Error(ErrorCode::UnstableGridPoint, detail), rho_(rho) {}

int cardinality(TypeSet set) noexcept { return std::popcount(set); }

std::vector<int> members(TypeSet set) {
  std::vector<int> out;
  while (set != 0) {
    out.push_back(std::countr_zero(set));
    set &= set - 1;
  }
  return out;
}

std::vector<ValidationIssue> validate(const ModelSpec& spec) {
  std::vector<ValidationIssue> issues;
  auto report = [&](IssueKind kind, std::string message) {
    issues.push_back({kind, std::move(message)});
  };

  const auto n_agents = spec.agents.size();
  const auto n_goods = spec.goods.size();
  if (n_agents > static_cast<std::size_t>(kMaxTypes) || n_goods > static_cast<std::size_t>(kMaxTypes)) {
    report(IssueKind::TooManyTypes, "at most " + std::to_string(kMaxTypes) + " agent and good types are supported");
  }

  double alpha_sum = 0.0;
  for (const auto& a : spec.agents) {
    alpha_sum += a.alpha;
    if (!(a.alpha > 0.0)) report(IssueKind::NonPositiveFrequency, "agent '" + a.name + "' has alpha <= 0");
  }
  double beta_sum = 0.0;
  for (const auto& g : spec.goods) {
    beta_sum += g.beta;
    if (!(g.beta > 0.0)) report(IssueKind::NonPositiveFrequency, "good '" + g.name + "' has beta <= 0");
  }
  if (!(std::abs(alpha_sum - 1.0) <= kFrequencySumTolerance)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "agent frequencies sum to " << alpha_sum << ", expected 1";
    report(IssueKind::FrequencySumError, msg.str());
  }
  if (!(std::abs(beta_sum - 1.0) <= kFrequencySumTolerance)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "good frequencies sum to " << beta_sum << ", expected 1";
    report(IssueKind::FrequencySumError, msg.str());
  }

  if (!(spec.lambda_bar > 0.0)) report(IssueKind::NonPositiveRate, "lambda_bar must be > 0");
  if (!(spec.mu_bar > 0.0)) report(IssueKind::NonPositiveRate, "mu_bar must be > 0");

  std::set<std::string> seen;
  for (const auto& a : spec.agents) {
    if (!seen.insert(a.name).second) report(IssueKind::DuplicateIdentifier, "duplicate identifier '" + a.name + "'");
  }
  for (const auto& g : spec.goods) {
    if (!seen.insert(g.name).second) report(IssueKind::DuplicateIdentifier, "duplicate identifier '" + g.name + "'");
  }

  std::vector<bool> has_edge(n_agents, false);
  for (const auto& [good, agent] : spec.edges) {
    const int j = find_index(spec.goods, good);
    const int i = find_index(spec.agents, agent);
    if (j < 0) report(IssueKind::UnknownIdentifier, "edge references unknown good '" + good + "'");
    if (i < 0) report(IssueKind::UnknownIdentifier, "edge references unknown agent '" + agent + "'");
    if (i >= 0 && j >= 0) has_edge[i] = true;
  }
  for (std::size_t i = 0; i < n_agents; ++i) {
    if (!has_edge[i]) {
      report(IssueKind::IsolatedAgentType, "agent '" + spec.agents[i].name + "' has no compatible good type");
    }
  }
  return issues;
}

InvalidModel::InvalidModel(std::vector<ValidationIssue> issues)
    : Error(ErrorCode::InvalidModel,
            [&] {
              std::string msg = "invalid model:";
              for (const auto& issue : issues) {
                msg += "\n  ";
                msg += to_string(issue.kind);
                msg += ": ";
                msg += issue.message;
              }
              return msg;
            }()),
      issues_(std::move(issues)) {}

bool InvalidModel::has(IssueKind kind) const noexcept {
  return std::any_of(issues_.begin(), issues_.end(), [&](const auto& i) { return i.kind == kind; });
}

MatchingModel MatchingModel::build(ModelSpec spec) {
  auto issues = validate(spec);
  if (!issues.empty()) throw InvalidModel(std::move(issues));
  return MatchingModel(std::move(spec));
}

MatchingModel::MatchingModel(ModelSpec spec) : spec_(std::move(spec)) {
  const int n_agents = agent_count();
  const int n_goods = good_count();
  lambda_.resize(n_agents);
  mu_.resize(n_goods);
  goods_of_.assign(n_agents, 0);
  agents_of_.assign(n_goods, 0);
  for (int i = 0; i < n_agents; ++i) lambda_[i] = spec_.lambda_bar * spec_.agents[i].alpha;
  for (int j = 0; j < n_goods; ++j) mu_[j] = spec_.mu_bar * spec_.goods[j].beta;
  for (const auto& [good, agent] : spec_.edges) {
    const int j = find_index(spec_.goods, good);
    const int i = find_index(spec_.agents, agent);
    goods_of_[i] |= single(j);
    agents_of_[j] |= single(i);
  }
}

std::vector<std::string> MatchingModel::agent_names() const {
  std::vector<std::string> out;
  for (const auto& a : spec_.agents) out.push_back(a.name);
  return out;
}

std::vector<std::string> MatchingModel::good_names() const {
  std::vector<std::string> out;
  for (const auto& g : spec_.goods) out.push_back(g.name);
  return out;
}

int MatchingModel::agent_index(std::string_view name) const {
  const int i = find_index(spec_.agents, name);
  if (i < 0) throw Error(ErrorCode::UnknownIdentifier, "unknown agent type '" + std::string(name) + "'");
  return i;
}

int MatchingModel::good_index(std::string_view name) const {
  const int j = find_index(spec_.goods, name);
  if (j < 0) throw Error(ErrorCode::UnknownIdentifier, "unknown good type '" + std::string(name) + "'");
  return j;
}

TypeSet MatchingModel::agent_set(std::span<const std::string> names) const {
  TypeSet out = 0;
  for (const auto& n : names) out |= single(agent_index(n));
  return out;
}

TypeSet MatchingModel::good_set(std::span<const std::string> names) const {
  TypeSet out = 0;
  for (const auto& n : names) out |= single(good_index(n));
  return out;
}

double MatchingModel::alpha_of(TypeSet agents) const {
  double s = 0.0;
  for (int i : members(agents)) s += alpha(i);
  return s;
}

double MatchingModel::beta_of(TypeSet goods) const {
  double s = 0.0;
  for (int j : members(goods)) s += beta(j);
  return s;
}

double MatchingModel::lambda_of(TypeSet agents) const {
  double s = 0.0;
  for (int i : members(agents)) s += lambda_[i];
  return s;
}

double MatchingModel::mu_of(TypeSet goods) const {
  double s = 0.0;
  for (int j : members(goods)) s += mu_[j];
  return s;
}

MatchingModel MatchingModel::with_rates(double lambda_bar, double mu_bar) const {
  ModelSpec spec = spec_;
  spec.lambda_bar = lambda_bar;
  spec.mu_bar = mu_bar;
  return build(std::move(spec));
}

TypeSet compatible_goods(const MatchingModel& model, TypeSet agents) {
  if ((agents & ~model.all_agents()) != 0) throw Error(ErrorCode::UnknownIdentifier, "agent subset references undeclared types");
  TypeSet out = 0;
  for (int i : members(agents)) out |= model.goods_of(i);
  return out;
}

TypeSet compatible_agents(const MatchingModel& model, TypeSet goods) {
  if ((goods & ~model.all_goods()) != 0) throw Error(ErrorCode::UnknownIdentifier, "good subset references undeclared types");
  TypeSet out = 0;
  for (int j : members(goods)) out |= model.agents_of(j);
  return out;
}

TypeSet unique_users(const MatchingModel& model, TypeSet goods) {
  if ((goods & ~model.all_goods()) != 0) throw Error(ErrorCode::UnknownIdentifier, "good subset references undeclared types");
  const TypeSet outside = model.all_goods() & ~goods;
  return model.all_agents() & ~compatible_agents(model, outside);
}

std::vector<TypeSet> canonical_subsets(int n) {
  require_subset_enumerable(n);
  std::vector<TypeSet> out;
  out.reserve((std::size_t{1} << n) - 1);
  std::vector<int> idx;
  for (int k = 1; k <= n; ++k) {
    idx.resize(k);
    for (int m = 0; m < k; ++m) idx[m] = m;
    while (true) {
      TypeSet s = 0;
      for (int m : idx) s |= single(m);
      out.push_back(s);
      int pos = k - 1;
      while (pos >= 0 && idx[pos] == n - k + pos) --pos;
      if (pos < 0) break;
      ++idx[pos];
      for (int m = pos + 1; m < k; ++m) idx[m] = idx[m - 1] + 1;
    }
  }
  return out;
}

StabilityReport check_stability(const MatchingModel& model) {
  StabilityReport report;
  report.stable = true;
  report.min_margin = std::numeric_limits<double>::infinity();
  double worst_violation = 0.0;
  for (TypeSet c : canonical_subsets(model.agent_count())) {
    const double lambda_c = model.lambda_of(c);
    const double mu_s = model.mu_of(compatible_goods(model, c));
    report.min_margin = std::min(report.min_margin, mu_s - lambda_c);
    if (!(lambda_c < mu_s)) {
      const double violation = lambda_c - mu_s;
      // Canonical order plus strict '>' gives the tie-breaking rule.
      if (report.stable || violation > worst_violation) {
        report.witness = c;
        worst_violation = violation;
      }
      report.stable = false;
    }
  }
  return report;
}

bool check_crp(const MatchingModel& model) {
  if (compatible_goods(model, model.all_agents()) != model.all_goods()) return false;
  const TypeSet all = model.all_agents();
  for (TypeSet c : canonical_subsets(model.agent_count())) {
    if (c == all) continue;
    if (!(model.alpha_of(c) < model.beta_of(compatible_goods(model, c)))) return false;
  }
  return true;
}

StableRhoBound max_stable_rho(const MatchingModel& model) {
  StableRhoBound bound;
  bound.max_rho = std::numeric_limits<double>::infinity();
  bound.proper_min = std::numeric_limits<double>::infinity();
  const TypeSet all = model.all_agents();
  for (TypeSet c : canonical_subsets(model.agent_count())) {
    const double ratio = model.beta_of(compatible_goods(model, c)) / model.alpha_of(c);
    bound.max_rho = std::min(bound.max_rho, ratio);
    if (c != all) bound.proper_min = std::min(bound.proper_min, ratio);
  }
  return bound;
}

}  // namespace fcfs
