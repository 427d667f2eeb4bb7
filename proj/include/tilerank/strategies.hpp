#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tilerank/dataset.hpp"
#include "tilerank/performance.hpp"
#include "tilerank/ranking.hpp"

namespace tilerank {

/// Everything a prediction strategy may look at for one test domain: the
/// other domains (with leaderboard-style weights) and the test domain's
/// category and semantic-label distribution — never its performances.
struct StrategyContext {
  Dataset references;
  DomainId test_id;
  std::string test_category;
  SemanticDistribution test_semantic;
  DomainWeights weights;  // defined exactly over the reference domains
  double tie_tol = 0.0;
  bool category_restricted = false;
};

/// Builds the leave-one-domain-out context for a test domain.
StrategyContext make_context(const Dataset& dataset, const DomainId& test_id,
                             double tie_tol = 0.0);

/// Restricts a context to the test domain's category, with weights
/// recomputed uniformly over the surviving references.
/// Throws EmptyCategory when no reference shares the test category.
StrategyContext apply_category_modifier(const StrategyContext& ctx);

enum class StrategyKind {
  fixed,       // a supplied leaderboard ranking, preference-independent
  mean_perf,   // score of the weighted performance mixture
  sem_perf,    // score of the performance predicted from semantics
  sem_dist,    // scores of the semantically nearest reference
  mean_value,  // weighted mean of reference scores
  mean_rank,   // weighted mean of reference ranks
  med_value,   // weighted median of reference scores
  med_rank,    // weighted median of reference ranks
  combine,     // mixture of sub-strategy predictions via value conversion
};

struct StrategySpec {
  std::string id;
  StrategyKind kind = StrategyKind::fixed;
  bool category_specific = false;
  std::vector<StrategySpec> sub_strategies;        // combine only
  std::optional<TileCoord> rank_coord_override;    // mean/med_rank only
};

/// Parses one strategy from the CLI grammar, e.g. "fixed", "mean-P*",
/// "mean-R*@0.5,0.3", "avg(fixed,mean-P,sem-P,sem-d)", "all(avg,avg*)".
/// Bare "avg" expands to avg(fixed,mean-P,sem-P,sem-d); bare "all" to
/// all(avg,avg*).
StrategySpec parse_strategy(std::string_view text);

/// Splits a comma-separated list (commas inside parentheses do not split)
/// and parses each element.
std::vector<StrategySpec> parse_strategy_list(std::string_view text);

/// True when the spec or any sub-strategy is the fixed-leaderboard kind
/// (those predictions are not leave-one-domain-out).
bool contains_fixed(const StrategySpec& spec);

/// Per-entity ranking scores of one domain's stored performances at a
/// preference point; entities whose score is undefined stay undefined.
ScoreVector ground_truth_scores(const Dataset& dataset, const DomainRecord& domain,
                                TileCoord coord);

ScoreVector predict_values(const StrategySpec& spec, const StrategyContext& ctx,
                           TileCoord coord);
Ranking predict_ranking(const StrategySpec& spec, const StrategyContext& ctx,
                        TileCoord coord);

}  // namespace tilerank
