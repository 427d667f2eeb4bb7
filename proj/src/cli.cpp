#include "tilerank/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "tilerank/dataset.hpp"
#include "tilerank/harness.hpp"
#include "tilerank/render.hpp"
#include "tilerank/strategies.hpp"
#include "tilerank/tile_grid.hpp"

namespace tilerank {
namespace {

namespace fs = std::filesystem;

TileCoord parse_coord(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw InvalidParams("coordinate must be given as a,b");
  }
  TileCoord coord;
  try {
    std::size_t used = 0;
    coord.a = std::stod(text.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument("a");
    const std::string bs = text.substr(comma + 1);
    coord.b = std::stod(bs, &used);
    if (used != bs.size()) throw std::invalid_argument("b");
  } catch (const std::exception&) {
    throw InvalidParams("coordinate must be given as a,b with real a and b");
  }
  if (!(coord.a >= 0.0 && coord.a <= 1.0 && coord.b >= 0.0 && coord.b <= 1.0)) {
    throw OutOfRange("coordinates must lie in [0,1]");
  }
  return coord;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void ensure_fresh_dir(const fs::path& dir) {
  if (fs::exists(dir)) {
    if (!fs::is_directory(dir) || !fs::is_empty(dir)) {
      throw IoError("output '" + dir.string() +
                    "' already exists and is not an empty directory");
    }
    return;
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  }
}

void write_images(const ValueTile& tile, const Colormap& cmap, int scale,
                  const fs::path& base) {
  const Image img = render_tile(tile, cmap, scale);
  write_ppm(img, base.string() + ".ppm");
  write_png(img, base.string() + ".png");
}

void write_label_images(const LabelTile& tile,
                        const std::vector<std::string>& id_order, int scale,
                        const fs::path& base) {
  const Image img = render_label_tile(tile, id_order, scale);
  write_ppm(img, base.string() + ".ppm");
  write_png(img, base.string() + ".png");
}

double tile_average(const ValueTile& tile) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& cell : tile.cells()) {
    if (!cell) continue;
    sum += *cell;
    ++n;
  }
  return n == 0 ? std::numeric_limits<double>::quiet_NaN()
                : sum / static_cast<double>(n);
}

struct CommonArgs {
  std::string dataset;
  int resolution = 101;
  double tie_tol = 0.0;
};

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Evaluates strategies that predict performance-based rankings "
               "of entities on unseen domains, over the whole preference "
               "square of ranking scores."};
  app.require_subcommand(1);

  CommonArgs common;
  std::string strategies_text;
  std::string out_path;
  std::string coord_text = "0.5,0.5";
  std::string colormap_name = "redgreen";
  std::string domain_id;
  std::string strategy_text;
  std::string input_path;
  std::string objective = "both";
  int scale = 4;
  bool category_balanced = false;

  auto add_dataset = [&](CLI::App* cmd) {
    cmd->add_option("--dataset", common.dataset, "dataset JSON file")
        ->required();
  };

  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "run the leave-one-domain-out evaluation and write a report");
  add_dataset(evaluate);
  evaluate->add_option("--strategies", strategies_text,
                       "comma-separated strategy specs (see README)")
      ->required();
  evaluate->add_option("--resolution", common.resolution,
                       "lattice resolution (default 101)");
  evaluate->add_option("--out", out_path, "fresh report directory")->required();
  evaluate->add_option("--tie-tol", common.tie_tol,
                       "score difference treated as a tie (default 0)");
  evaluate->add_flag("--category-balanced-mean", category_balanced,
                     "weight domains CDnet-style in mean correlation tiles");
  evaluate->add_option("--colormap", colormap_name,
                       "colormap for rendered tiles (redgreen, grayscale)");
  evaluate->add_option("--scale", scale, "pixel block size (default 4)");
  evaluate->add_option("--objective", objective,
                       "hybrid objective(s) to render images for (CSVs always "
                       "cover both): mean, min, or both")
      ->check(CLI::IsMember({"mean", "min", "both"}));

  CLI::App* baselines = app.add_subcommand(
      "baselines", "write the pairwise mean/min baseline correlation tiles");
  add_dataset(baselines);
  baselines->add_option("--resolution", common.resolution, "lattice resolution");
  baselines->add_option("--out", out_path, "fresh output directory")->required();
  baselines->add_option("--colormap", colormap_name, "colormap");
  baselines->add_option("--scale", scale, "pixel block size");

  CLI::App* predict = app.add_subcommand(
      "predict", "print one strategy's predicted ranking for one domain");
  add_dataset(predict);
  predict->add_option("--domain", domain_id, "test domain id")->required();
  predict->add_option("--strategy", strategy_text, "strategy spec")->required();
  predict->add_option("--coord", coord_text, "preference point a,b");
  predict->add_option("--tie-tol", common.tie_tol, "tie tolerance");

  CLI::App* render = app.add_subcommand(
      "render", "render a tile CSV to <out>.ppm and <out>.png");
  render->add_option("--input", input_path, "tile CSV file")->required();
  render->add_option("--out", out_path, "output path without extension")
      ->required();
  render->add_option("--colormap", colormap_name, "colormap");
  render->add_option("--scale", scale, "pixel block size");

  CLI::App* layers = app.add_subcommand(
      "layers", "export per-entity rank-layer tiles for one domain");
  add_dataset(layers);
  layers->add_option("--domain", domain_id, "domain id")->required();
  layers->add_option("--strategy", strategy_text,
                     "strategy spec (default: the domain's true rankings)");
  layers->add_option("--resolution", common.resolution, "lattice resolution");
  layers->add_option("--out", out_path, "fresh output directory")->required();
  layers->add_option("--tie-tol", common.tie_tol, "tie tolerance");

  CLI::App* synth = app.add_subcommand(
      "synth", "generate a deterministic synthetic dataset");
  int n_domains = 5, n_entities = 10, n_categories = 1, n_labels = 3;
  double drift = 0.5;
  std::uint64_t seed = 0;
  synth->add_option("--domains", n_domains, "number of domains")->required();
  synth->add_option("--entities", n_entities, "number of entities")->required();
  synth->add_option("--categories", n_categories, "number of categories");
  synth->add_option("--labels", n_labels, "number of semantic labels");
  synth->add_option("--drift", drift, "per-domain perturbation in [0,1]");
  synth->add_option("--seed", seed, "generator seed");
  synth->add_option("--out", out_path, "output dataset file")->required();

  CLI::App* validate = app.add_subcommand(
      "validate", "check a dataset file against every schema invariant");
  add_dataset(validate);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  if (*evaluate) {
    const std::string bytes = read_file(common.dataset);
    const Dataset ds = load_dataset_from_string(bytes);
    const auto specs = parse_strategy_list(strategies_text);
    LodoOptions options;
    options.resolution = common.resolution;
    options.tie_tol = common.tie_tol;
    options.category_balanced_mean = category_balanced;
    EvaluationReport report = lodo_evaluate(ds, specs, options);

    ensure_fresh_dir(out_path);
    ReportMeta meta{fnv1a_hex(bytes), colormap_name, scale};
    write_report_csv(report, out_path, meta);

    const Colormap cmap = colormap_by_name(colormap_name);
    std::vector<std::string> id_order;
    for (const auto& s : report.strategies) id_order.push_back(s.id);
    const fs::path dir = out_path;
    write_images(report.baseline_mean, cmap, scale, dir / "baseline" / "mean");
    write_images(report.baseline_min, cmap, scale, dir / "baseline" / "min");
    for (const auto& s : report.strategies) {
      write_images(s.mean_tile, cmap, scale, dir / s.id / "mean");
      write_images(s.min_tile, cmap, scale, dir / s.id / "min");
    }
    if (objective != "min") {
      write_label_images(report.hybrid_mean.selection, id_order, scale,
                         dir / "hybrid" / "mean-selection");
      write_images(report.hybrid_mean.achieved, cmap, scale,
                   dir / "hybrid" / "mean-achieved");
    }
    if (objective != "mean") {
      write_label_images(report.hybrid_min.selection, id_order, scale,
                         dir / "hybrid" / "min-selection");
      write_images(report.hybrid_min.achieved, cmap, scale,
                   dir / "hybrid" / "min-achieved");
    }

    for (const auto& s : report.strategies) {
      out << s.id << ": tile-averaged mean(tau) = "
          << tile_average(s.mean_tile)
          << (s.non_lodo ? "  [not leave-one-domain-out]" : "") << "\n";
    }
    out << "report written to " << out_path << "\n";
    return 0;
  }

  if (*baselines) {
    const Dataset ds = load_dataset(common.dataset);
    auto [mean_tile, min_tile] = baseline_pairwise(ds, common.resolution);
    ensure_fresh_dir(out_path);
    const fs::path dir = out_path;
    write_tile_csv(mean_tile, dir / "mean.csv");
    write_tile_csv(min_tile, dir / "min.csv");
    const Colormap cmap = colormap_by_name(colormap_name);
    write_images(mean_tile, cmap, scale, dir / "mean");
    write_images(min_tile, cmap, scale, dir / "min");
    out << "baseline tiles written to " << out_path << "\n";
    out << "tile-averaged mean(tau) = " << tile_average(mean_tile) << "\n";
    return 0;
  }

  if (*predict) {
    const Dataset ds = load_dataset(common.dataset);
    const StrategySpec spec = parse_strategy(strategy_text);
    const StrategyContext ctx = make_context(ds, domain_id, common.tie_tol);
    const Ranking ranking = predict_ranking(spec, ctx, parse_coord(coord_text));
    std::vector<std::pair<int, EntityId>> rows;
    for (std::size_t i = 0; i < ranking.size(); ++i) {
      rows.emplace_back(ranking.rank(i), ranking.entities()[i]);
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& [rank, entity] : rows) {
      out << rank << "\t" << entity << "\n";
    }
    return 0;
  }

  if (*render) {
    const ValueTile tile = read_value_tile_csv(input_path);
    const Colormap cmap = colormap_by_name(colormap_name);
    const Image img = render_tile(tile, cmap, scale);
    write_ppm(img, out_path + ".ppm");
    write_png(img, out_path + ".png");
    out << "wrote " << out_path << ".ppm and " << out_path << ".png\n";
    return 0;
  }

  if (*layers) {
    const Dataset ds = load_dataset(common.dataset);
    if (!ds.has_domain(domain_id)) {
      throw UnknownDomain("unknown domain '" + domain_id + "'");
    }
    ensure_fresh_dir(out_path);
    std::optional<StrategySpec> spec;
    std::optional<StrategyContext> ctx;
    if (!strategy_text.empty()) {
      spec = parse_strategy(strategy_text);
      ctx = make_context(ds, domain_id, common.tie_tol);
    }
    std::function<Ranking(TileCoord)> ranking_at = [&](TileCoord c) {
      return spec ? predict_ranking(*spec, *ctx, c)
                  : ground_truth_ranking(ds, domain_id, c, common.tie_tol);
    };
    export_rank_layers(ds.entities(), ranking_at, common.resolution, out_path);
    out << "rank layers written to " << out_path << "\n";
    return 0;
  }

  if (*synth) {
    const Dataset ds =
        synth_dataset(n_domains, n_entities, n_categories, n_labels, drift, seed);
    save_dataset(ds, out_path);
    out << "synthetic dataset written to " << out_path << " ("
        << ds.domains().size() << " domains, " << ds.entities().size()
        << " entities)\n";
    return 0;
  }

  if (*validate) {
    const Dataset ds = load_dataset(common.dataset);
    out << "OK: " << ds.domains().size() << " domain(s), "
        << ds.entities().size() << " entities, " << ds.categories().size()
        << " categor" << (ds.categories().size() == 1 ? "y" : "ies");
    std::size_t with_cond = 0;
    for (const auto& d : ds.domains()) {
      if (d.has_conditionals()) ++with_cond;
    }
    out << ", conditionals on " << with_cond << "/" << ds.domains().size()
        << " domains" << (ds.global_ranking() ? ", global ranking" : "")
        << "\n";
    return 0;
  }

  return 2;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  try {
    return run(args, out, err);
  } catch (const SpecParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cli_main(int argc, const char* const* argv, std::ostream& out,
             std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, out, err);
}

}  // namespace tilerank
