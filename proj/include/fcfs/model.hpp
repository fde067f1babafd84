#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fcfs/errors.hpp"

namespace fcfs {

/// Bit i set <=> type i (in declared order) is a member.
using TypeSet = std::uint64_t;

inline constexpr int kMaxTypes = 64;

constexpr TypeSet single(int index) noexcept { return TypeSet{1} << index; }
constexpr bool contains(TypeSet set, int index) noexcept { return (set >> index) & 1U; }
constexpr TypeSet full_set(int count) noexcept {
  return count >= 64 ? ~TypeSet{0} : (TypeSet{1} << count) - 1;
}
int cardinality(TypeSet set) noexcept;
std::vector<int> members(TypeSet set);

struct AgentType {
  std::string name;
  double alpha = 0.0;
};

struct GoodType {
  std::string name;
  double beta = 0.0;
};

/// Unvalidated model description, as read from a model file.
struct ModelSpec {
  std::vector<AgentType> agents;
  std::vector<GoodType> goods;
  std::vector<std::pair<std::string, std::string>> edges;  // (good, agent)
  double lambda_bar = 0.0;
  double mu_bar = 0.0;
};

enum class IssueKind {
  FrequencySumError,
  NonPositiveFrequency,
  UnknownIdentifier,
  DuplicateIdentifier,
  IsolatedAgentType,
  NonPositiveRate,
  TooManyTypes,
};

const char* to_string(IssueKind kind) noexcept;

struct ValidationIssue {
  IssueKind kind;
  std::string message;
};

/// Every violated model invariant, in a fixed order. Empty means valid.
std::vector<ValidationIssue> validate(const ModelSpec& spec);

class InvalidModel : public Error {
 public:
  explicit InvalidModel(std::vector<ValidationIssue> issues);

  const std::vector<ValidationIssue>& issues() const noexcept { return issues_; }
  bool has(IssueKind kind) const noexcept;

 private:
  std::vector<ValidationIssue> issues_;
};

/// A validated directed FCFS bipartite matching model.
///
/// Immutable after construction; per-type rates and neighbourhoods are
/// cached so that every derived quantity is computed from the same numbers.
class MatchingModel {
 public:
  /// Throws InvalidModel listing every violated invariant.
  static MatchingModel build(ModelSpec spec);

  int agent_count() const noexcept { return static_cast<int>(spec_.agents.size()); }
  int good_count() const noexcept { return static_cast<int>(spec_.goods.size()); }

  const std::string& agent_name(int i) const { return spec_.agents.at(i).name; }
  const std::string& good_name(int j) const { return spec_.goods.at(j).name; }
  std::vector<std::string> agent_names() const;
  std::vector<std::string> good_names() const;

  double alpha(int i) const { return spec_.agents[i].alpha; }
  double beta(int j) const { return spec_.goods[j].beta; }
  double lambda(int i) const { return lambda_[i]; }
  double mu(int j) const { return mu_[j]; }
  double lambda_bar() const noexcept { return spec_.lambda_bar; }
  double mu_bar() const noexcept { return spec_.mu_bar; }
  double total_rate() const noexcept { return spec_.lambda_bar + spec_.mu_bar; }
  double rho() const noexcept { return spec_.lambda_bar / spec_.mu_bar; }

  /// S(c_i) and C(s_j).
  TypeSet goods_of(int agent) const { return goods_of_[agent]; }
  TypeSet agents_of(int good) const { return agents_of_[good]; }
  bool compatible(int good, int agent) const { return contains(goods_of_[agent], good); }

  TypeSet all_agents() const noexcept { return full_set(agent_count()); }
  TypeSet all_goods() const noexcept { return full_set(good_count()); }

  int agent_index(std::string_view name) const;
  int good_index(std::string_view name) const;
  TypeSet agent_set(std::span<const std::string> names) const;
  TypeSet good_set(std::span<const std::string> names) const;

  double alpha_of(TypeSet agents) const;
  double beta_of(TypeSet goods) const;
  double lambda_of(TypeSet agents) const;
  double mu_of(TypeSet goods) const;

  /// Same graph and frequencies, new aggregate rates.
  MatchingModel with_rates(double lambda_bar, double mu_bar) const;

  const ModelSpec& spec() const noexcept { return spec_; }

 private:
  explicit MatchingModel(ModelSpec spec);

  ModelSpec spec_;
  std::vector<double> lambda_;
  std::vector<double> mu_;
  std::vector<TypeSet> goods_of_;
  std::vector<TypeSet> agents_of_;
};

/// S(C): goods compatible with at least one agent type in C.
TypeSet compatible_goods(const MatchingModel& model, TypeSet agents);
/// C(S): agents compatible with at least one good type in S.
TypeSet compatible_agents(const MatchingModel& model, TypeSet goods);
/// U(S): agent types compatible only with goods in S.
TypeSet unique_users(const MatchingModel& model, TypeSet goods);

/// Nonempty subsets of {0..n-1}, by increasing cardinality, then
/// lexicographically by member indices.
std::vector<TypeSet> canonical_subsets(int n);

struct StabilityReport {
  bool stable = false;
  /// Violating agent subset with the largest lambda_C - mu_S(C).
  std::optional<TypeSet> witness;
  /// min over C of mu_S(C) - lambda_C.
  double min_margin = 0.0;
};

StabilityReport check_stability(const MatchingModel& model);

/// Complete resource pooling: alpha_C < beta_S(C) for every proper nonempty C,
/// and every good type has at least one compatible agent type.
bool check_crp(const MatchingModel& model);

struct StableRhoBound {
  /// min over all nonempty C of beta_S(C) / alpha_C; never exceeds
  /// beta_S(all) / alpha_all, so it is at most ~1.
  double max_rho = 0.0;
  /// Same minimum over proper nonempty C only (+inf when I = 1).
  double proper_min = 0.0;
};

StableRhoBound max_stable_rho(const MatchingModel& model);

}  // namespace fcfs
