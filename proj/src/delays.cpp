#include "fcfs/delays.hpp"

#include <limits>

namespace fcfs {

namespace {

/// Sums X * prod_{h>=l} stage(gap_h) over terms where `good` is matched to
/// `agent` at level l, together with the plain X sum used to normalise.
template <class Stage>
class TransformAccumulator {
 public:
  TransformAccumulator(int good, int agent, Stage stage) : good_(good), agent_(agent), stage_(stage) {}

  void visit(const PermutationTerm& term) {
    const int k = term.size();
    for (int l = 0; l < k; ++l) {
      if (!contains(term.new_goods[l], good_)) continue;
      if (term.order[l] != agent_) return;
      double product = 1.0;
      for (int h = l; h < k; ++h) product *= stage_(term.gap(h));
      numerator_ += term.weight * product;
      denominator_ += term.weight;
      return;
    }
  }

  void merge(const TransformAccumulator& other) {
    numerator_ += other.numerator_;
    denominator_ += other.denominator_;
  }

  double numerator() const { return numerator_.value(); }
  double denominator() const { return denominator_.value(); }

 private:
  int good_;
  int agent_;
  Stage stage_;
  CompensatedSum numerator_;
  CompensatedSum denominator_;
};

void require_pair(const MatchingModel& model, int good, int agent) {
  if (good < 0 || good >= model.good_count() || agent < 0 || agent >= model.agent_count()) {
    throw Error(ErrorCode::UnknownIdentifier, "pair index out of range");
  }
  if (!model.compatible(good, agent)) {
    throw Error(ErrorCode::ZeroRate, "(" + model.good_name(good) + ", " + model.agent_name(agent) +
                                         ") is not an edge; its matching rate is zero");
  }
}

template <class Stage>
double mixture_transform(const MatchingModel& model, int good, int agent, Stage stage, const EnumerationOptions& options) {
  const auto acc = enumerate_terms(model, options, [&] { return TransformAccumulator<Stage>(good, agent, stage); });
  if (!(acc.denominator() > 0.0)) {
    throw Error(ErrorCode::ZeroRate, "(" + model.good_name(good) + ", " + model.agent_name(agent) + ") has zero matching rate");
  }
  return acc.numerator() / acc.denominator();
}

}  // namespace

GeometricStage geometric_stage(const MatchingModel& model, std::span<const int> prefix) {
  if (prefix.empty()) throw Error(ErrorCode::DomainError, "prefix must be nonempty");
  TypeSet used = 0;
  for (int t : prefix) {
    if (t < 0 || t >= model.agent_count()) throw Error(ErrorCode::UnknownIdentifier, "agent index out of range");
    if (contains(used, t)) throw Error(ErrorCode::DuplicateType, "agent type '" + model.agent_name(t) + "' repeated in prefix");
    used |= single(t);
  }
  const double p = (model.mu_of(compatible_goods(model, used)) - model.lambda_of(used)) / model.total_rate();
  if (!(p > 0.0)) throw Error(ErrorCode::UnstableModel, "stage probability is not positive");
  return GeometricStage{p};
}

DelayReport delay_moments(const MatchingModel& model, const EnumerationOptions& options) {
  return analyze(model, options).delays;
}

double delay_pgf(const MatchingModel& model, int good, int agent, double z, const EnumerationOptions& options) {
  require_pair(model, good, agent);
  if (!(z >= 0.0 && z <= 1.0)) throw Error(ErrorCode::DomainError, "PGF argument must lie in [0, 1]");
  const double total = model.total_rate();
  auto stage = [z, total](double gap) { return GeometricStage{gap / total}.pgf(z); };
  return mixture_transform(model, good, agent, stage, options);
}

double min_stage_rate(const MatchingModel& model, int agent) {
  double best = std::numeric_limits<double>::infinity();
  for (TypeSet c : canonical_subsets(model.agent_count())) {
    if (!contains(c, agent)) continue;
    best = std::min(best, model.mu_of(compatible_goods(model, c)) - model.lambda_of(c));
  }
  return best;
}

double wait_mgf(const MatchingModel& model, int good, int agent, double s, const EnumerationOptions& options) {
  require_pair(model, good, agent);
  if (!(s < min_stage_rate(model, agent))) {
    throw Error(ErrorCode::DomainError, "MGF argument must lie below the smallest stage rate");
  }
  auto stage = [s](double theta) { return theta / (theta - s); };
  return mixture_transform(model, good, agent, stage, options);
}

}  // namespace fcfs
