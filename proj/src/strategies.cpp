#include "tilerank/strategies.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

namespace tilerank {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

void require_references(const StrategyContext& ctx) {
  if (ctx.references.domains().empty()) {
    throw StrategyUnavailable("no reference domains available");
  }
}

std::optional<double> try_score(const Performance& perf, const Importance& imp) {
  try {
    return ranking_score(perf, imp);
  } catch (const UndefinedScore&) {
    return std::nullopt;
  }
}

ScoreVector values_fixed(const StrategyContext& ctx) {
  const Ranking* ranking = nullptr;
  if (ctx.category_restricted) {
    auto it = ctx.references.category_rankings().find(ctx.test_category);
    if (it == ctx.references.category_rankings().end()) {
      throw StrategyUnavailable("no per-category ranking for category '" +
                                ctx.test_category + "'");
    }
    ranking = &it->second;
  } else {
    if (!ctx.references.global_ranking()) {
      throw MissingGlobalRanking("dataset carries no global ranking");
    }
    ranking = &*ctx.references.global_ranking();
  }
  std::vector<std::pair<EntityId, std::optional<double>>> items;
  items.reserve(ranking->size());
  for (std::size_t i = 0; i < ranking->size(); ++i) {
    items.emplace_back(ranking->entities()[i],
                       -static_cast<double>(ranking->rank(i)));
  }
  return ScoreVector(std::move(items));
}

Performance mixed_performance(const StrategyContext& ctx, std::size_t entity) {
  std::vector<std::pair<Performance, double>> items;
  items.reserve(ctx.references.domains().size());
  for (const auto& d : ctx.references.domains()) {
    items.emplace_back(d.performances[entity], ctx.weights.at(d.id));
  }
  return mix_performances(items);
}

ScoreVector values_mean_perf(const StrategyContext& ctx, TileCoord coord) {
  require_references(ctx);
  const Importance imp = canonical_importance(coord);
  const auto& entities = ctx.references.entities();
  std::vector<std::pair<EntityId, std::optional<double>>> items;
  items.reserve(entities.size());
  for (std::size_t e = 0; e < entities.size(); ++e) {
    items.emplace_back(entities[e], try_score(mixed_performance(ctx, e), imp));
  }
  return ScoreVector(std::move(items));
}

ScoreVector values_sem_perf(const StrategyContext& ctx, TileCoord coord) {
  require_references(ctx);
  for (const auto& d : ctx.references.domains()) {
    if (!d.has_conditionals()) {
      throw StrategyUnavailable("domain '" + d.id +
                                "' has no conditional distributions");
    }
  }
  const Importance imp = canonical_importance(coord);
  const auto& entities = ctx.references.entities();
  std::vector<std::pair<EntityId, std::optional<double>>> items;
  items.reserve(entities.size());
  for (std::size_t e = 0; e < entities.size(); ++e) {
    std::array<double, 4> acc{0.0, 0.0, 0.0, 0.0};
    for (const auto& [label, test_mass] : ctx.test_semantic.mass()) {
      if (test_mass <= 0.0) continue;
      // Pool the per-label conditionals across references, each weighted by
      // domain weight times the evidence the domain has for the label.
      std::vector<std::pair<Performance, double>> pooled;
      for (const auto& d : ctx.references.domains()) {
        const double w = ctx.weights.at(d.id) * d.semantic.p(label);
        if (w <= 0.0) continue;
        auto it = d.conditionals[e].find(label);
        if (it == d.conditionals[e].end()) continue;
        pooled.emplace_back(it->second, w);
      }
      // A label unseen in every reference falls back to the entity's plain
      // performance mixture for that share of the mass.
      const Performance contribution =
          pooled.empty() ? mixed_performance(ctx, e) : mix_performances(pooled);
      for (std::size_t c = 0; c < 4; ++c) {
        acc[c] += test_mass * contribution.mass()[c];
      }
    }
    items.emplace_back(entities[e], try_score(Performance(acc), imp));
  }
  return ScoreVector(std::move(items));
}

ScoreVector values_sem_dist(const StrategyContext& ctx, TileCoord coord) {
  require_references(ctx);
  const DomainRecord* best = nullptr;
  double best_dist = std::numeric_limits<double>::infinity();
  for (const auto& d : ctx.references.domains()) {
    const double dist = bhattacharyya_distance(ctx.test_semantic, d.semantic);
    // Ties (including between infinite distances) break toward the
    // lexicographically smallest domain id.
    if (best == nullptr || dist < best_dist ||
        (dist == best_dist && d.id < best->id)) {
      best = &d;
      best_dist = dist;
    }
  }
  return ground_truth_scores(ctx.references, *best, coord);
}

ScoreVector values_aggregate(const StrategyContext& ctx, TileCoord coord,
                             AggregateMode mode) {
  require_references(ctx);
  std::vector<std::pair<ScoreVector, double>> vectors;
  vectors.reserve(ctx.references.domains().size());
  for (const auto& d : ctx.references.domains()) {
    vectors.emplace_back(ground_truth_scores(ctx.references, d, coord),
                         ctx.weights.at(d.id));
  }
  return aggregate_values(vectors, mode);
}

ScoreVector values_rank_aggregate(const StrategySpec& spec,
                                  const StrategyContext& ctx, TileCoord coord,
                                  AggregateMode mode) {
  require_references(ctx);
  const TileCoord inducing = spec.rank_coord_override.value_or(coord);
  std::vector<std::pair<Ranking, double>> rankings;
  rankings.reserve(ctx.references.domains().size());
  for (const auto& d : ctx.references.domains()) {
    rankings.emplace_back(
        rank_from_scores(ground_truth_scores(ctx.references, d, inducing),
                         ctx.tie_tol),
        ctx.weights.at(d.id));
  }
  return aggregate_rank_scores(rankings, mode);
}

ScoreVector values_combine(const StrategySpec& spec, const StrategyContext& ctx,
                           TileCoord coord) {
  // Convert each sub-strategy's values into performances using the
  // sub-strategy's own value span, then mix per entity uniformly and score
  // the mixture.
  std::vector<std::vector<std::optional<Performance>>> converted;
  std::vector<EntityId> entities;
  for (const auto& sub : spec.sub_strategies) {
    const ScoreVector vec = predict_values(sub, ctx, coord);
    if (entities.empty()) entities = vec.entities();
    double lo = 0.0, hi = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < vec.size(); ++i) {
      if (!vec.value(i)) continue;
      const double v = *vec.value(i);
      lo = any ? std::min(lo, v) : v;
      hi = any ? std::max(hi, v) : v;
      any = true;
    }
    std::vector<std::optional<Performance>> perf(vec.size());
    for (std::size_t i = 0; i < vec.size(); ++i) {
      if (!vec.value(i)) continue;
      if (any && lo < hi) {
        perf[i] = value_to_performance(*vec.value(i), lo, hi);
      } else {
        // Degenerate span: every defined value collapses to the neutral
        // performance.
        perf[i] = Performance(0.25, 0.25, 0.25, 0.25);
      }
    }
    converted.push_back(std::move(perf));
  }

  const Importance imp = canonical_importance(coord);
  std::vector<std::pair<EntityId, std::optional<double>>> items;
  items.reserve(entities.size());
  for (std::size_t i = 0; i < entities.size(); ++i) {
    std::vector<std::pair<Performance, double>> mix;
    for (const auto& sub : converted) {
      if (sub[i]) mix.emplace_back(*sub[i], 1.0);
    }
    if (mix.empty()) {
      items.emplace_back(entities[i], std::nullopt);
    } else {
      items.emplace_back(entities[i], try_score(mix_performances(mix), imp));
    }
  }
  return ScoreVector(std::move(items));
}

ScoreVector predict_values_impl(const StrategySpec& spec,
                                const StrategyContext& ctx, TileCoord coord) {
  switch (spec.kind) {
    case StrategyKind::fixed:      return values_fixed(ctx);
    case StrategyKind::mean_perf:  return values_mean_perf(ctx, coord);
    case StrategyKind::sem_perf:   return values_sem_perf(ctx, coord);
    case StrategyKind::sem_dist:   return values_sem_dist(ctx, coord);
    case StrategyKind::mean_value:
      return values_aggregate(ctx, coord, AggregateMode::mean);
    case StrategyKind::med_value:
      return values_aggregate(ctx, coord, AggregateMode::median);
    case StrategyKind::mean_rank:
      return values_rank_aggregate(spec, ctx, coord, AggregateMode::mean);
    case StrategyKind::med_rank:
      return values_rank_aggregate(spec, ctx, coord, AggregateMode::median);
    case StrategyKind::combine:    return values_combine(spec, ctx, coord);
  }
  throw InvalidParams("unhandled strategy kind");
}

}  // namespace

StrategyContext make_context(const Dataset& dataset, const DomainId& test_id,
                             double tie_tol) {
  const DomainRecord& test = dataset.domain(test_id);
  std::vector<DomainRecord> refs;
  for (const auto& d : dataset.domains()) {
    if (d.id != test_id) refs.push_back(d);
  }
  DomainWeights weights;
  if (!refs.empty()) {
    weights = cdnet_weights(dataset, test_id);
    weights.w.erase(test_id);  // weights cover exactly the references
  }
  return StrategyContext{
      Dataset(dataset.entities(), std::move(refs), dataset.global_ranking(),
              dataset.category_rankings()),
      test_id,
      test.category,
      test.semantic,
      std::move(weights),
      tie_tol,
      false};
}

StrategyContext apply_category_modifier(const StrategyContext& ctx) {
  if (ctx.category_restricted) return ctx;
  std::vector<DomainRecord> refs;
  for (const auto& d : ctx.references.domains()) {
    if (d.category == ctx.test_category) refs.push_back(d);
  }
  if (refs.empty()) {
    throw EmptyCategory("no reference domain in category '" +
                        ctx.test_category + "'");
  }
  Dataset restricted(ctx.references.entities(), std::move(refs),
                     ctx.references.global_ranking(),
                     ctx.references.category_rankings());
  DomainWeights weights = cdnet_weights(restricted, std::nullopt);
  return StrategyContext{std::move(restricted), ctx.test_id, ctx.test_category,
                         ctx.test_semantic,     std::move(weights),
                         ctx.tie_tol,           true};
}

ScoreVector ground_truth_scores(const Dataset& dataset,
                                const DomainRecord& domain, TileCoord coord) {
  const Importance imp = canonical_importance(coord);
  const auto& entities = dataset.entities();
  std::vector<std::pair<EntityId, std::optional<double>>> items;
  items.reserve(entities.size());
  for (std::size_t e = 0; e < entities.size(); ++e) {
    items.emplace_back(entities[e], try_score(domain.performances[e], imp));
  }
  return ScoreVector(std::move(items));
}

ScoreVector predict_values(const StrategySpec& spec, const StrategyContext& ctx,
                           TileCoord coord) {
  if (spec.category_specific && !ctx.category_restricted) {
    try {
      return predict_values_impl(spec, apply_category_modifier(ctx), coord);
    } catch (const EmptyCategory& e) {
      throw StrategyUnavailable(e.what());
    }
  }
  return predict_values_impl(spec, ctx, coord);
}

Ranking predict_ranking(const StrategySpec& spec, const StrategyContext& ctx,
                        TileCoord coord) {
  return rank_from_scores(predict_values(spec, ctx, coord), ctx.tie_tol);
}

// ---------------------------------------------------------------------------
// Strategy grammar
// ---------------------------------------------------------------------------

namespace {

class SpecParser {
 public:
  explicit SpecParser(std::string_view text) : text_(text) {}

  StrategySpec parse() {
    StrategySpec spec = parse_spec();
    skip_ws();
    if (pos_ != text_.size()) {
      fail("unexpected trailing input '" + std::string(text_.substr(pos_)) + "'");
    }
    return spec;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw SpecParseError("strategy '" + std::string(text_) + "': " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  std::string parse_name() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '-')) {
      ++pos_;
    }
    if (pos_ == start) fail("expected a strategy name");
    return std::string(text_.substr(start, pos_ - start));
  }

  double parse_real() {
    skip_ws();
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc()) fail("expected a real number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return value;
  }

  StrategySpec parse_spec() {
    skip_ws();
    const std::size_t start = pos_;
    StrategySpec spec;
    const std::string name = parse_name();
    if (name == "avg" || name == "all") {
      spec.kind = StrategyKind::combine;
      if (eat('(')) {
        spec.sub_strategies.push_back(parse_spec());
        while (eat(',')) spec.sub_strategies.push_back(parse_spec());
        if (!eat(')')) fail("expected ')'");
        if (spec.sub_strategies.size() < 2) {
          fail("a combination needs at least two sub-strategies");
        }
      } else if (name == "avg") {
        for (const char* sub : {"fixed", "mean-P", "sem-P", "sem-d"}) {
          spec.sub_strategies.push_back(parse_strategy(sub));
        }
      } else {
        spec.sub_strategies.push_back(parse_strategy("avg"));
        spec.sub_strategies.push_back(parse_strategy("avg*"));
      }
    } else if (name == "fixed") {
      spec.kind = StrategyKind::fixed;
    } else if (name == "mean-P") {
      spec.kind = StrategyKind::mean_perf;
    } else if (name == "sem-P") {
      spec.kind = StrategyKind::sem_perf;
    } else if (name == "sem-d") {
      spec.kind = StrategyKind::sem_dist;
    } else if (name == "mean-V") {
      spec.kind = StrategyKind::mean_value;
    } else if (name == "mean-R") {
      spec.kind = StrategyKind::mean_rank;
    } else if (name == "med-V") {
      spec.kind = StrategyKind::med_value;
    } else if (name == "med-R") {
      spec.kind = StrategyKind::med_rank;
    } else {
      fail("unknown strategy name '" + name + "'");
    }

    if (eat('*')) spec.category_specific = true;
    if (eat('@')) {
      if (spec.kind != StrategyKind::mean_rank &&
          spec.kind != StrategyKind::med_rank) {
        fail("'@a,b' applies only to mean-R and med-R");
      }
      const double a = parse_real();
      if (!eat(',')) fail("expected ',' in '@a,b'");
      const double b = parse_real();
      if (!(a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0)) {
        fail("override coordinates must lie in [0,1]");
      }
      spec.rank_coord_override = TileCoord{a, b};
    }
    spec.id = std::string(trim(text_.substr(start, pos_ - start)));
    return spec;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

StrategySpec parse_strategy(std::string_view text) {
  return SpecParser(trim(text)).parse();
}

std::vector<StrategySpec> parse_strategy_list(std::string_view text) {
  std::vector<StrategySpec> specs;
  int depth = 0;
  bool in_override = false;  // the first comma after '@' belongs to "a,b"
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i < text.size()) {
      if (text[i] == '(') ++depth;
      if (text[i] == ')') --depth;
      if (text[i] == '@') in_override = true;
      if (text[i] == ',' && in_override) {
        in_override = false;
        continue;
      }
    }
    if (i == text.size() || (text[i] == ',' && depth == 0)) {
      const std::string_view item = trim(text.substr(start, i - start));
      if (item.empty()) {
        throw SpecParseError("empty entry in strategy list '" +
                             std::string(text) + "'");
      }
      specs.push_back(parse_strategy(item));
      start = i + 1;
    }
  }
  return specs;
}

bool contains_fixed(const StrategySpec& spec) {
  if (spec.kind == StrategyKind::fixed) return true;
  for (const auto& sub : spec.sub_strategies) {
    if (contains_fixed(sub)) return true;
  }
  return false;
}

}  // namespace tilerank
