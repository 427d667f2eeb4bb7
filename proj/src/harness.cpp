#include "tilerank/harness.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

namespace tilerank {
namespace {

using nlohmann::json;

void check_lodo_inputs(const Dataset& dataset) {
  if (dataset.domains().size() < 2) {
    throw InvalidParams("leave-one-domain-out needs at least two domains");
  }
  if (dataset.entities().size() < 2) {
    throw InvalidParams("leave-one-domain-out needs at least two entities");
  }
}

std::vector<double> category_balanced_weights(const Dataset& dataset) {
  const DomainWeights w = cdnet_weights(dataset, std::nullopt);
  std::vector<double> out;
  out.reserve(dataset.domains().size());
  for (const auto& d : dataset.domains()) out.push_back(w.at(d.id));
  return out;
}

}  // namespace

Ranking ground_truth_ranking(const Dataset& dataset, const DomainId& domain_id,
                             TileCoord coord, double tie_tol) {
  return rank_from_scores(
      ground_truth_scores(dataset, dataset.domain(domain_id), coord), tie_tol);
}

StrategyEntry make_strategy_entry(const StrategySpec& spec) {
  return StrategyEntry{
      spec.id,
      [spec](const StrategyContext& ctx, TileCoord coord) {
        return predict_ranking(spec, ctx, coord);
      },
      contains_fixed(spec)};
}

EvaluationReport lodo_evaluate(const Dataset& dataset,
                               const std::vector<StrategyEntry>& strategies,
                               const LodoOptions& options) {
  check_lodo_inputs(dataset);
  if (strategies.empty()) {
    throw EmptyReport("no strategies to evaluate");
  }
  for (std::size_t i = 0; i < strategies.size(); ++i) {
    for (std::size_t j = i + 1; j < strategies.size(); ++j) {
      if (strategies[i].id == strategies[j].id) {
        throw InvalidParams("duplicate strategy id '" + strategies[i].id + "'");
      }
    }
  }

  std::vector<StrategyContext> contexts;
  contexts.reserve(dataset.domains().size());
  for (const auto& d : dataset.domains()) {
    contexts.push_back(make_context(dataset, d.id, options.tie_tol));
  }

  EvaluationReport report;
  report.resolution = options.resolution;
  report.tie_tol = options.tie_tol;
  report.category_balanced_mean = options.category_balanced_mean;

  for (const auto& entry : strategies) {
    StrategyResult result;
    result.id = entry.id;
    result.non_lodo = entry.non_lodo;
    std::vector<ValueTile> tiles;
    for (std::size_t di = 0; di < dataset.domains().size(); ++di) {
      const DomainId& domain_id = dataset.domains()[di].id;
      const StrategyContext& ctx = contexts[di];
      ValueTile tile = map_tile(options.resolution, [&](TileCoord coord) {
        const Ranking predicted = entry.predict(ctx, coord);
        const Ranking truth =
            ground_truth_ranking(dataset, domain_id, coord, options.tie_tol);
        return kendall_tau(predicted, truth);
      });
      result.per_domain.emplace_back(domain_id, tile);
      tiles.push_back(std::move(tile));
    }
    result.mean_tile =
        options.category_balanced_mean
            ? weighted_mean_tiles(tiles, category_balanced_weights(dataset))
            : reduce_tiles(tiles, ReduceMode::mean);
    result.min_tile = reduce_tiles(tiles, ReduceMode::min);
    report.strategies.push_back(std::move(result));
  }

  auto [baseline_mean, baseline_min] =
      baseline_pairwise(dataset, options.resolution);
  report.baseline_mean = std::move(baseline_mean);
  report.baseline_min = std::move(baseline_min);

  for (Objective objective : {Objective::mean, Objective::min}) {
    auto [selection, achieved] = hybrid_select(report, objective);
    HybridResult hybrid{std::move(selection), std::move(achieved), {}};
    for (const auto& s : report.strategies) {
      hybrid.area_fractions[s.id] = tile_area_fraction(hybrid.selection, s.id);
    }
    (objective == Objective::mean ? report.hybrid_mean : report.hybrid_min) =
        std::move(hybrid);
  }
  return report;
}

EvaluationReport lodo_evaluate(const Dataset& dataset,
                               const std::vector<StrategySpec>& strategies,
                               const LodoOptions& options) {
  std::vector<StrategyEntry> entries;
  entries.reserve(strategies.size());
  for (const auto& spec : strategies) entries.push_back(make_strategy_entry(spec));
  return lodo_evaluate(dataset, entries, options);
}

std::pair<ValueTile, ValueTile> baseline_pairwise(const Dataset& dataset,
                                                  int resolution) {
  check_lodo_inputs(dataset);
  if (resolution < 2) {
    throw ResolutionTooSmall("tile resolution must be at least 2");
  }
  const std::size_t n_domains = dataset.domains().size();
  const std::size_t count =
      static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution);
  std::vector<std::optional<double>> mean_cells(count), min_cells(count);

  std::vector<std::optional<Ranking>> rankings(n_domains);
  for (int j = 0; j < resolution; ++j) {
    for (int i = 0; i < resolution; ++i) {
      const TileCoord coord = lattice_coord(i, j, resolution);
      for (std::size_t d = 0; d < n_domains; ++d) {
        try {
          rankings[d] = ground_truth_ranking(dataset, dataset.domains()[d].id,
                                             coord);
        } catch (const Error&) {
          rankings[d] = std::nullopt;
        }
      }
      double sum = 0.0, mn = 0.0;
      std::size_t pairs = 0;
      for (std::size_t x = 0; x < n_domains; ++x) {
        for (std::size_t y = x + 1; y < n_domains; ++y) {
          if (!rankings[x] || !rankings[y]) continue;
          const double tau = kendall_tau(*rankings[x], *rankings[y]);
          sum += tau;
          mn = (pairs == 0) ? tau : std::min(mn, tau);
          ++pairs;
        }
      }
      const std::size_t k = static_cast<std::size_t>(j) * resolution + i;
      if (pairs > 0) {
        mean_cells[k] = sum / static_cast<double>(pairs);
        min_cells[k] = mn;
      }
    }
  }
  return {ValueTile(resolution, std::move(mean_cells)),
          ValueTile(resolution, std::move(min_cells))};
}

std::pair<LabelTile, ValueTile> hybrid_select(const EvaluationReport& report,
                                              Objective objective) {
  if (report.strategies.empty()) {
    throw EmptyReport("report holds no strategies");
  }
  std::vector<std::pair<std::string, ValueTile>> named;
  named.reserve(report.strategies.size());
  for (const auto& s : report.strategies) {
    named.emplace_back(s.id, objective == Objective::mean ? s.mean_tile
                                                          : s.min_tile);
  }
  LabelTile selection = argmax_tile(named);

  const std::size_t count = selection.cell_count();
  std::vector<std::optional<double>> achieved(count);
  for (std::size_t k = 0; k < count; ++k) {
    for (const auto& [id, tile] : named) {
      const auto& cell = tile.at_index(k);
      if (!cell) continue;
      if (!achieved[k] || *cell > *achieved[k]) achieved[k] = *cell;
    }
  }
  return {std::move(selection),
          ValueTile(selection.resolution(), std::move(achieved))};
}

void write_report_csv(const EvaluationReport& report,
                      const std::filesystem::path& dir, const ReportMeta& meta) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  }

  json manifest;
  manifest["format_version"] = 1;
  manifest["dataset_hash"] = meta.dataset_hash;
  manifest["resolution"] = report.resolution;
  manifest["tie_tol"] = report.tie_tol;
  manifest["category_balanced_mean"] = report.category_balanced_mean;
  manifest["colormap"] = meta.colormap;
  manifest["scale"] = meta.scale;
  json jstrategies = json::array();
  for (const auto& s : report.strategies) {
    json js;
    js["id"] = s.id;
    js["non_lodo"] = s.non_lodo;
    jstrategies.push_back(std::move(js));
  }
  manifest["strategies"] = std::move(jstrategies);
  json jdomains = json::array();
  if (!report.strategies.empty()) {
    for (const auto& [id, _] : report.strategies.front().per_domain) {
      jdomains.push_back(id);
    }
  }
  manifest["domains"] = std::move(jdomains);
  json jareas;
  jareas["mean"] = report.hybrid_mean.area_fractions;
  jareas["min"] = report.hybrid_min.area_fractions;
  manifest["area_fractions"] = std::move(jareas);

  std::ofstream mf(dir / "manifest.json", std::ios::binary);
  if (!mf) {
    throw IoError("cannot write manifest in '" + dir.string() + "'");
  }
  mf << manifest.dump(2) << "\n";

  fs::create_directories(dir / "baseline");
  write_tile_csv(report.baseline_mean, dir / "baseline" / "mean.csv");
  write_tile_csv(report.baseline_min, dir / "baseline" / "min.csv");

  for (const auto& s : report.strategies) {
    const fs::path sdir = dir / s.id;
    fs::create_directories(sdir);
    for (const auto& [domain_id, tile] : s.per_domain) {
      write_tile_csv(tile, sdir / (domain_id + ".csv"));
    }
    write_tile_csv(s.mean_tile, sdir / "mean.csv");
    write_tile_csv(s.min_tile, sdir / "min.csv");
  }

  fs::create_directories(dir / "hybrid");
  write_tile_csv(report.hybrid_mean.selection, dir / "hybrid" / "mean-selection.csv");
  write_tile_csv(report.hybrid_mean.achieved, dir / "hybrid" / "mean-achieved.csv");
  write_tile_csv(report.hybrid_min.selection, dir / "hybrid" / "min-selection.csv");
  write_tile_csv(report.hybrid_min.achieved, dir / "hybrid" / "min-achieved.csv");
}

}  // namespace tilerank
