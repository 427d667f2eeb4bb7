#include "tilerank/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace tilerank {
namespace {

template <typename T>
std::vector<EntityId> sorted_entities(
    const std::vector<std::pair<EntityId, T>>& items) {
  if (items.empty()) {
    throw InvalidParams("entity set must be non-empty");
  }
  std::vector<EntityId> names;
  names.reserve(items.size());
  for (const auto& [name, _] : items) names.push_back(name);
  std::sort(names.begin(), names.end());
  if (std::adjacent_find(names.begin(), names.end()) != names.end()) {
    throw InvalidParams("duplicate entity id in entity set");
  }
  return names;
}

void check_same_entities(const std::vector<EntityId>& a,
                         const std::vector<EntityId>& b,
                         const char* what) {
  if (a != b) {
    throw EntityMismatch(std::string(what) + ": entity sets differ");
  }
}

// Lower weighted median: the smallest value whose cumulative weight reaches
// half of the total.
double weighted_median_lower(std::vector<std::pair<double, double>> vw) {
  std::sort(vw.begin(), vw.end());
  double total = 0.0;
  for (const auto& [v, w] : vw) total += w;
  double cum = 0.0;
  for (const auto& [v, w] : vw) {
    cum += w;
    if (cum >= 0.5 * total) return v;
  }
  return vw.back().first;
}

double weighted_aggregate(const std::vector<std::pair<double, double>>& vw,
                          AggregateMode mode) {
  if (mode == AggregateMode::median) return weighted_median_lower(vw);
  double num = 0.0, den = 0.0;
  for (const auto& [v, w] : vw) {
    num += w * v;
    den += w;
  }
  return num / den;
}

void check_weights(const std::vector<double>& weights, const char* what) {
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0 || std::isnan(w)) {
      throw InvalidParams(std::string(what) + ": weights must be non-negative");
    }
    total += w;
  }
  if (total <= 0.0) {
    throw AllZeroWeights(std::string(what) + ": needs a positive weight");
  }
}

}  // namespace

ScoreVector::ScoreVector(
    std::vector<std::pair<EntityId, std::optional<double>>> items) {
  entities_ = sorted_entities(items);
  std::sort(items.begin(), items.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  values_.reserve(items.size());
  for (auto& [_, v] : items) values_.push_back(v);
}

const std::optional<double>& ScoreVector::value(const EntityId& entity) const {
  auto it = std::lower_bound(entities_.begin(), entities_.end(), entity);
  if (it == entities_.end() || *it != entity) {
    throw InvalidParams("unknown entity '" + entity + "'");
  }
  return values_[static_cast<std::size_t>(it - entities_.begin())];
}

Ranking Ranking::from_ranks(
    const std::vector<std::pair<EntityId, double>>& ranks) {
  // Canonicalize through rank_from_scores on negated rank numbers.
  std::vector<std::pair<EntityId, std::optional<double>>> items;
  items.reserve(ranks.size());
  for (const auto& [name, r] : ranks) items.emplace_back(name, -r);
  return rank_from_scores(ScoreVector(std::move(items)), 0.0);
}

int Ranking::rank(const EntityId& entity) const {
  auto it = std::lower_bound(entities_.begin(), entities_.end(), entity);
  if (it == entities_.end() || *it != entity) {
    throw InvalidParams("unknown entity '" + entity + "'");
  }
  return ranks_[static_cast<std::size_t>(it - entities_.begin())];
}

Ranking rank_from_scores(const ScoreVector& scores, double tie_tol) {
  if (tie_tol < 0.0 || std::isnan(tie_tol)) {
    throw InvalidParams("tie tolerance must be non-negative");
  }
  const std::size_t n = scores.size();
  std::vector<std::size_t> defined;
  for (std::size_t i = 0; i < n; ++i) {
    if (scores.value(i)) defined.push_back(i);
  }
  if (defined.empty()) {
    throw NoDefinedScores("no entity has a defined score");
  }
  std::sort(defined.begin(), defined.end(), [&](std::size_t x, std::size_t y) {
    if (*scores.value(x) != *scores.value(y)) {
      return *scores.value(x) > *scores.value(y);
    }
    return x < y;
  });

  Ranking out;
  out.entities_ = scores.entities();
  out.ranks_.assign(n, static_cast<int>(defined.size()) + 1);
  int rank = 1;
  for (std::size_t k = 0; k < defined.size(); ++k) {
    // A gap wider than tie_tol between consecutive sorted values ends the
    // transitively chained tie group.
    if (k > 0 &&
        *scores.value(defined[k - 1]) - *scores.value(defined[k]) > tie_tol) {
      rank = static_cast<int>(k) + 1;
    }
    out.ranks_[defined[k]] = rank;
  }
  return out;
}

double kendall_tau(const Ranking& r1, const Ranking& r2) {
  check_same_entities(r1.entities(), r2.entities(), "kendall_tau");
  const std::size_t n = r1.size();
  if (n < 2) {
    throw TooFewEntities("kendall_tau needs at least two entities");
  }
  std::int64_t concordant = 0, discordant = 0;
  std::int64_t tied_only_1 = 0, tied_only_2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const int d1 = (r1.rank(i) > r1.rank(j)) - (r1.rank(i) < r1.rank(j));
      const int d2 = (r2.rank(i) > r2.rank(j)) - (r2.rank(i) < r2.rank(j));
      if (d1 == 0 && d2 == 0) continue;  // tied in both: ignored by tau-b
      if (d1 == 0) {
        ++tied_only_1;
      } else if (d2 == 0) {
        ++tied_only_2;
      } else if (d1 == d2) {
        ++concordant;
      } else {
        ++discordant;
      }
    }
  }
  const std::int64_t f1 = concordant + discordant + tied_only_1;
  const std::int64_t f2 = concordant + discordant + tied_only_2;
  if (f1 == 0 || f2 == 0) return 0.0;
  return static_cast<double>(concordant - discordant) /
         std::sqrt(static_cast<double>(f1) * static_cast<double>(f2));
}

double tau_to_probability(double tau) {
  if (!(tau >= -1.0 && tau <= 1.0)) {
    throw OutOfRange("tau must lie in [-1,1]");
  }
  return (1.0 + tau) / 2.0;
}

ScoreVector aggregate_rank_scores(
    const std::vector<std::pair<Ranking, double>>& rankings,
    AggregateMode mode) {
  if (rankings.empty()) {
    throw EmptyList("aggregate_ranks needs at least one ranking");
  }
  std::vector<double> weights;
  for (const auto& [_, w] : rankings) weights.push_back(w);
  check_weights(weights, "aggregate_ranks");
  const auto& entities = rankings.front().first.entities();
  for (const auto& [r, _] : rankings) {
    check_same_entities(entities, r.entities(), "aggregate_ranks");
  }

  std::vector<std::pair<EntityId, std::optional<double>>> out;
  out.reserve(entities.size());
  for (std::size_t i = 0; i < entities.size(); ++i) {
    std::vector<std::pair<double, double>> vw;
    for (const auto& [r, w] : rankings) {
      if (w > 0.0) vw.emplace_back(static_cast<double>(r.rank(i)), w);
    }
    out.emplace_back(entities[i], -weighted_aggregate(vw, mode));
  }
  return ScoreVector(std::move(out));
}

Ranking aggregate_ranks(const std::vector<std::pair<Ranking, double>>& rankings,
                        AggregateMode mode) {
  return rank_from_scores(aggregate_rank_scores(rankings, mode), 0.0);
}

ScoreVector aggregate_values(
    const std::vector<std::pair<ScoreVector, double>>& vectors,
    AggregateMode mode) {
  if (vectors.empty()) {
    throw EmptyList("aggregate_values needs at least one vector");
  }
  std::vector<double> weights;
  for (const auto& [_, w] : vectors) weights.push_back(w);
  check_weights(weights, "aggregate_values");
  const auto& entities = vectors.front().first.entities();
  for (const auto& [v, _] : vectors) {
    check_same_entities(entities, v.entities(), "aggregate_values");
  }

  std::vector<std::pair<EntityId, std::optional<double>>> out;
  out.reserve(entities.size());
  for (std::size_t i = 0; i < entities.size(); ++i) {
    std::vector<std::pair<double, double>> vw;
    for (const auto& [vec, w] : vectors) {
      if (w > 0.0 && vec.value(i)) vw.emplace_back(*vec.value(i), w);
    }
    if (vw.empty()) {
      out.emplace_back(entities[i], std::nullopt);
    } else {
      out.emplace_back(entities[i], weighted_aggregate(vw, mode));
    }
  }
  return ScoreVector(std::move(out));
}

}  // namespace tilerank
