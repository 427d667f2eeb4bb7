#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tilerank/errors.hpp"

namespace tilerank {

using EntityId = std::string;

/// Per-entity real values, higher is better. An entity may carry no value
/// (its score is undefined at the queried preference point).
class ScoreVector {
 public:
  explicit ScoreVector(
      std::vector<std::pair<EntityId, std::optional<double>>> items);

  std::size_t size() const { return entities_.size(); }
  const std::vector<EntityId>& entities() const { return entities_; }
  const std::optional<double>& value(std::size_t i) const { return values_[i]; }
  const std::optional<double>& value(const EntityId& entity) const;

  bool operator==(const ScoreVector&) const = default;

 private:
  std::vector<EntityId> entities_;  // sorted, unique
  std::vector<std::optional<double>> values_;
};

/// A competition ("1224") ranking over a fixed entity set: rank 1 is best and
/// rank(e) = 1 + number of entities strictly better than e. Construction
/// canonicalizes any rank numbers consistent with a weak order.
class Ranking {
 public:
  /// Builds a ranking from arbitrary rank-like numbers (smaller = better);
  /// equal numbers tie. The stored ranks are re-derived in competition form.
  static Ranking from_ranks(
      const std::vector<std::pair<EntityId, double>>& ranks);

  std::size_t size() const { return entities_.size(); }
  const std::vector<EntityId>& entities() const { return entities_; }
  int rank(std::size_t i) const { return ranks_[i]; }
  int rank(const EntityId& entity) const;

  bool operator==(const Ranking&) const = default;

 private:
  friend Ranking rank_from_scores(const ScoreVector&, double);
  Ranking() = default;

  std::vector<EntityId> entities_;  // sorted, unique
  std::vector<int> ranks_;
};

/// Ranks entities by descending score. Values within tie_tol of each other
/// (chained transitively) share a rank; entities without a defined score sink
/// to the shared worst rank. Throws NoDefinedScores when nothing is defined.
Ranking rank_from_scores(const ScoreVector& scores, double tie_tol = 0.0);

/// Kendall's tau-b between two rankings over the same entity set.
/// Returns 0 when either ranking is entirely tied.
double kendall_tau(const Ranking& r1, const Ranking& r2);

/// Maps a correlation in [-1,1] to the probability (1+tau)/2 that a random
/// entity pair is ordered the same way in both rankings.
double tau_to_probability(double tau);

enum class AggregateMode { mean, median };

/// Per-entity weighted mean/median rank, negated so that higher is better.
/// This is the raw score carrier behind rank-averaging predictors.
ScoreVector aggregate_rank_scores(
    const std::vector<std::pair<Ranking, double>>& rankings,
    AggregateMode mode);

/// Aggregates rankings entity-wise (weighted mean or lower weighted median of
/// ranks) and re-ranks the aggregates, smaller aggregate = better.
Ranking aggregate_ranks(const std::vector<std::pair<Ranking, double>>& rankings,
                        AggregateMode mode);

/// Entity-wise weighted mean or lower weighted median of score vectors.
/// For each entity, only inputs defining that entity participate (weights are
/// renormalized over them); an entity defined nowhere stays undefined.
ScoreVector aggregate_values(
    const std::vector<std::pair<ScoreVector, double>>& vectors,
    AggregateMode mode);

}  // namespace tilerank
