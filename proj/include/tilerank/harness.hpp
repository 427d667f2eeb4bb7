#pragma once

#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "tilerank/dataset.hpp"
#include "tilerank/strategies.hpp"
#include "tilerank/tile_grid.hpp"

namespace tilerank {

/// The ranking a domain's stored performances induce at a preference point.
Ranking ground_truth_ranking(const Dataset& dataset, const DomainId& domain_id,
                             TileCoord coord, double tie_tol = 0.0);

/// A named predictor the harness can evaluate. Besides the grammar-built
/// strategies, callers may inject custom predictors (e.g. a ground-truth
/// oracle in tests).
struct StrategyEntry {
  std::string id;
  std::function<Ranking(const StrategyContext&, TileCoord)> predict;
  bool non_lodo = false;  // prediction uses data that includes the test domain
};

StrategyEntry make_strategy_entry(const StrategySpec& spec);

struct StrategyResult {
  std::string id;
  bool non_lodo = false;
  std::vector<std::pair<DomainId, ValueTile>> per_domain;  // dataset order
  ValueTile mean_tile;
  ValueTile min_tile;
};

enum class Objective { mean, min };

struct HybridResult {
  LabelTile selection;
  ValueTile achieved;
  std::map<std::string, double> area_fractions;  // every strategy id
};

struct EvaluationReport {
  int resolution = 0;
  double tie_tol = 0.0;
  bool category_balanced_mean = false;
  std::vector<StrategyResult> strategies;
  ValueTile baseline_mean;
  ValueTile baseline_min;
  HybridResult hybrid_mean;
  HybridResult hybrid_min;
};

struct LodoOptions {
  int resolution = 101;
  double tie_tol = 0.0;
  bool category_balanced_mean = false;  // weight domains CDnet-style in means
};

/// Leave-one-domain-out evaluation: for every strategy and every test domain,
/// a correlation tile of Kendall tau between the prediction and the ground
/// truth, plus mean/min aggregates, pairwise baselines, and both hybrid
/// selections. Per-cell failures become error cells, never abort the run.
EvaluationReport lodo_evaluate(const Dataset& dataset,
                               const std::vector<StrategyEntry>& strategies,
                               const LodoOptions& options = {});
EvaluationReport lodo_evaluate(const Dataset& dataset,
                               const std::vector<StrategySpec>& strategies,
                               const LodoOptions& options = {});

/// Correlation tiles between ground-truth rankings of all unordered domain
/// pairs: the mean estimates the expected agreement when carrying a ranking
/// from one random domain to another, the minimum the worst case.
std::pair<ValueTile, ValueTile> baseline_pairwise(const Dataset& dataset,
                                                  int resolution);

/// Cell-wise best strategy under an objective, with the achieved values.
std::pair<LabelTile, ValueTile> hybrid_select(const EvaluationReport& report,
                                              Objective objective);

struct ReportMeta {
  std::string dataset_hash;
  std::string colormap;
  int scale = 1;
};

/// Writes the report directory: manifest.json, baseline/{mean,min}.csv,
/// <strategy>/{<domain>,mean,min}.csv, hybrid/{mean,min}-{selection,achieved}.csv.
void write_report_csv(const EvaluationReport& report,
                      const std::filesystem::path& dir, const ReportMeta& meta);

}  // namespace tilerank
