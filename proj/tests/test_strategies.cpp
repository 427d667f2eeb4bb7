#include <cmath>
#include <filesystem>

#include <doctest.h>

#include "tilerank/strategies.hpp"
#include "tilerank/tile_grid.hpp"

using namespace tilerank;

namespace {

const std::filesystem::path kFixtures = TILERANK_FIXTURE_DIR;

Performance perf(double tn, double fp, double fn, double tp) {
  return Performance(tn, fp, fn, tp);
}

// Two entities, three domains (two categories), conditionals on every domain,
// plus leaderboard rankings. Conditionals are built to reconstruct exactly.
Dataset fixture_dataset() {
  auto domain = [](DomainId id, std::string category,
                   std::map<SemanticLabel, double> sem,
                   std::vector<std::map<SemanticLabel, Performance>> cond) {
    std::vector<Performance> performances;
    for (const auto& per_label : cond) {
      std::array<double, 4> acc{0, 0, 0, 0};
      for (const auto& [label, p] : per_label) {
        const double mass = sem.at(label);
        for (std::size_t c = 0; c < 4; ++c) acc[c] += mass * p.mass()[c];
      }
      performances.emplace_back(acc);
    }
    return DomainRecord{std::move(id), std::move(category),
                        SemanticDistribution(std::move(sem)),
                        std::move(performances), std::move(cond)};
  };

  std::vector<DomainRecord> domains;
  domains.push_back(domain(
      "d1", "X", {{"sky", 0.5}, {"road", 0.5}},
      {{{"sky", perf(0.5, 0.1, 0.1, 0.3)}, {"road", perf(0.3, 0.1, 0.1, 0.5)}},
       {{"sky", perf(0.2, 0.3, 0.3, 0.2)}, {"road", perf(0.4, 0.2, 0.2, 0.2)}}}));
  domains.push_back(domain(
      "d2", "X", {{"sky", 0.8}, {"road", 0.2}},
      {{{"sky", perf(0.45, 0.15, 0.1, 0.3)}, {"road", perf(0.35, 0.1, 0.2, 0.35)}},
       {{"sky", perf(0.25, 0.25, 0.3, 0.2)}, {"road", perf(0.3, 0.3, 0.2, 0.2)}}}));
  domains.push_back(domain(
      "d3", "Y", {{"sky", 0.1}, {"road", 0.9}},
      {{{"sky", perf(0.4, 0.2, 0.2, 0.2)}, {"road", perf(0.25, 0.2, 0.15, 0.4)}},
       {{"sky", perf(0.3, 0.2, 0.2, 0.3)}, {"road", perf(0.35, 0.15, 0.2, 0.3)}}}));

  std::map<std::string, Ranking> category_rankings;
  category_rankings.emplace("X", Ranking::from_ranks({{"A", 1}, {"B", 2}}));
  category_rankings.emplace("Y", Ranking::from_ranks({{"A", 2}, {"B", 1}}));
  return Dataset({"A", "B"}, std::move(domains),
                 Ranking::from_ranks({{"A", 1}, {"B", 2}}),
                 std::move(category_rankings));
}

StrategySpec spec_of(const char* text) { return parse_strategy(text); }

}  // namespace

TEST_SUITE_BEGIN("strategies");

TEST_CASE("grammar accepts the documented forms") {
  CHECK(spec_of("fixed").kind == StrategyKind::fixed);
  CHECK(spec_of("mean-P").kind == StrategyKind::mean_perf);
  CHECK(spec_of("sem-P").kind == StrategyKind::sem_perf);
  CHECK(spec_of("sem-d").kind == StrategyKind::sem_dist);
  CHECK(spec_of("mean-V").kind == StrategyKind::mean_value);
  CHECK(spec_of("med-V").kind == StrategyKind::med_value);
  CHECK(spec_of("mean-R").kind == StrategyKind::mean_rank);
  CHECK(spec_of("med-R").kind == StrategyKind::med_rank);

  const StrategySpec starred = spec_of("mean-P*");
  CHECK(starred.category_specific);
  CHECK(starred.id == "mean-P*");

  const StrategySpec with_override = spec_of("mean-R*@0.5,0.3");
  CHECK(with_override.category_specific);
  REQUIRE(with_override.rank_coord_override.has_value());
  CHECK(with_override.rank_coord_override->a == 0.5);
  CHECK(with_override.rank_coord_override->b == 0.3);

  const StrategySpec combo = spec_of("avg(fixed,mean-P,sem-P,sem-d)");
  CHECK(combo.kind == StrategyKind::combine);
  REQUIRE(combo.sub_strategies.size() == 4);
  CHECK(combo.sub_strategies[0].kind == StrategyKind::fixed);
  CHECK(combo.sub_strategies[3].kind == StrategyKind::sem_dist);

  const StrategySpec bare_avg = spec_of("avg");
  CHECK(bare_avg.kind == StrategyKind::combine);
  REQUIRE(bare_avg.sub_strategies.size() == 4);
  CHECK(bare_avg.sub_strategies[1].id == "mean-P");

  const StrategySpec bare_all = spec_of("all");
  REQUIRE(bare_all.sub_strategies.size() == 2);
  CHECK(bare_all.sub_strategies[0].id == "avg");
  CHECK(bare_all.sub_strategies[1].id == "avg*");
  CHECK(bare_all.sub_strategies[1].category_specific);

  const StrategySpec starred_combo = spec_of("avg(fixed,mean-V)*");
  CHECK(starred_combo.category_specific);
}

TEST_CASE("grammar rejects malformed specs") {
  CHECK_THROWS_AS(spec_of("bogus"), SpecParseError);
  CHECK_THROWS_AS(spec_of("mean-P@0.5,0.5"), SpecParseError);  // no override here
  CHECK_THROWS_AS(spec_of("mean-R@1.5,0.5"), SpecParseError);
  CHECK_THROWS_AS(spec_of("avg(fixed)"), SpecParseError);  // needs two subs
  CHECK_THROWS_AS(spec_of("avg(fixed,mean-P"), SpecParseError);
  CHECK_THROWS_AS(spec_of("fixed extra"), SpecParseError);
  CHECK_THROWS_AS(spec_of(""), SpecParseError);
}

TEST_CASE("strategy lists split on top-level commas only") {
  const auto specs = parse_strategy_list("mean-P, avg(fixed,mean-V), sem-d*");
  REQUIRE(specs.size() == 3);
  CHECK(specs[0].id == "mean-P");
  CHECK(specs[1].id == "avg(fixed,mean-V)");
  CHECK(specs[2].id == "sem-d*");
  CHECK_THROWS_AS(parse_strategy_list("mean-P,,sem-d"), SpecParseError);

  // The comma inside an @a,b override is part of the spec, not a separator.
  const auto with_override =
      parse_strategy_list("mean-R*@0.5,0.3,med-R@0,1,fixed");
  REQUIRE(with_override.size() == 3);
  CHECK(with_override[0].id == "mean-R*@0.5,0.3");
  CHECK(with_override[1].id == "med-R@0,1");
  CHECK(with_override[2].id == "fixed");
}

TEST_CASE("contains_fixed walks the whole tree") {
  CHECK(contains_fixed(spec_of("fixed")));
  CHECK(contains_fixed(spec_of("avg")));
  CHECK(contains_fixed(spec_of("all")));
  CHECK(!contains_fixed(spec_of("mean-P")));
  CHECK(!contains_fixed(spec_of("avg(mean-P,mean-V)")));
}

TEST_CASE("make_context excludes the test domain from the references") {
  const Dataset ds = fixture_dataset();
  const StrategyContext ctx = make_context(ds, "d2");
  CHECK(ctx.test_id == "d2");
  CHECK(ctx.test_category == "X");
  CHECK(!ctx.references.has_domain("d2"));
  CHECK(ctx.references.domains().size() == 2);
  // weights cover exactly the references and sum to one
  CHECK(ctx.weights.w.size() == 2);
  CHECK(ctx.weights.total() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ctx.weights.at("d1") == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(ctx.weights.at("d3") == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(make_context(ds, "nope"), UnknownDomain);
}

TEST_CASE("apply_category_modifier filters and reweights") {
  const Dataset ds = fixture_dataset();
  const StrategyContext ctx = make_context(ds, "d1");
  const StrategyContext star = apply_category_modifier(ctx);
  CHECK(star.category_restricted);
  REQUIRE(star.references.domains().size() == 1);
  CHECK(star.references.domains()[0].id == "d2");
  CHECK(star.weights.at("d2") == 1.0);

  // No other domain shares d3's category.
  const StrategyContext lonely = make_context(ds, "d3");
  CHECK_THROWS_AS(apply_category_modifier(lonely), EmptyCategory);
  // Through a starred strategy this surfaces as unavailability.
  CHECK_THROWS_AS(predict_values(spec_of("mean-P*"), lonely, {0.5, 0.5}),
                  StrategyUnavailable);
}

TEST_CASE("fixed ignores the preference point") {
  const Dataset ds = fixture_dataset();
  const StrategyContext ctx = make_context(ds, "d1");
  const StrategySpec fixed = spec_of("fixed");
  const ScoreVector v1 = predict_values(fixed, ctx, {0.5, 0.5});
  const ScoreVector v2 = predict_values(fixed, ctx, {1.0, 0.0});
  CHECK(v1 == v2);
  CHECK(*v1.value("A") == -1.0);
  CHECK(*v1.value("B") == -2.0);
  const Ranking r = predict_ranking(fixed, ctx, {0.25, 0.75});
  CHECK(r.rank("A") == 1);
  CHECK(r.rank("B") == 2);
}

TEST_CASE("fixed* reads the test category's leaderboard") {
  const Dataset ds = fixture_dataset();
  const StrategySpec starred = spec_of("fixed*");
  // d3 is category Y; fixed* needs no references, only the ranking.
  // But category restriction fails for d3 (no other Y domain), so use d1/X.
  const Ranking rx = predict_ranking(starred, make_context(ds, "d1"), {0.5, 0.5});
  CHECK(rx.rank("A") == 1);

  // A dataset without per-category leaderboards cannot serve fixed*.
  Dataset no_cat(ds.entities(),
                 std::vector<DomainRecord>(ds.domains().begin(), ds.domains().end()),
                 ds.global_ranking(), {});
  CHECK_THROWS_AS(
      predict_values(starred, make_context(no_cat, "d1"), {0.5, 0.5}),
      StrategyUnavailable);
}

TEST_CASE("fixed without a global ranking is unavailable") {
  const Dataset ds = fixture_dataset();
  Dataset bare(ds.entities(),
               std::vector<DomainRecord>(ds.domains().begin(), ds.domains().end()),
               std::nullopt, {});
  CHECK_THROWS_AS(predict_values(spec_of("fixed"), make_context(bare, "d1"),
                                 {0.5, 0.5}),
                  MissingGlobalRanking);
}

TEST_CASE("mean-P with one reference reproduces its ground-truth scores") {
  const Dataset ds = fixture_dataset();
  StrategyContext ctx = make_context(ds, "d1");
  // Restrict to category X so a single reference (d2) remains.
  ctx = apply_category_modifier(ctx);
  const ScoreVector predicted =
      predict_values(spec_of("mean-P"), ctx, {0.3, 0.7});
  const ScoreVector truth =
      ground_truth_scores(ctx.references, ctx.references.domain("d2"), {0.3, 0.7});
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    CHECK(*predicted.value(i) == doctest::Approx(*truth.value(i)).epsilon(1e-12));
  }
}

TEST_CASE("mean-P at the accuracy point is the weighted accuracy") {
  const Dataset ds = fixture_dataset();
  const StrategyContext ctx = make_context(ds, "d2");
  const ScoreVector predicted =
      predict_values(spec_of("mean-P"), ctx, {0.5, 0.5});
  for (const EntityId& entity : ds.entities()) {
    const std::size_t e = ds.entity_index(entity);
    double expected = 0.0;
    for (const DomainId& id : {DomainId("d1"), DomainId("d3")}) {
      const auto& p = ds.domain(id).performances[e];
      expected += ctx.weights.at(id) * (p.tn() + p.tp());
    }
    CHECK(*predicted.value(entity) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("sem-P consistency with one reference and matching semantics") {
  const Dataset ds = fixture_dataset();
  StrategyContext ctx = make_context(ds, "d1");
  ctx = apply_category_modifier(ctx);  // only d2 remains
  ctx.test_semantic = ds.domain("d2").semantic;
  const ScoreVector predicted = predict_values(spec_of("sem-P"), ctx, {0.5, 0.5});
  const ScoreVector truth =
      ground_truth_scores(ctx.references, ctx.references.domain("d2"), {0.5, 0.5});
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    CHECK(*predicted.value(i) == doctest::Approx(*truth.value(i)).epsilon(1e-6));
  }
}

TEST_CASE("sem-P matches the hand-computed pooled mixture") {
  const Dataset ds = fixture_dataset();
  const StrategyContext ctx = make_context(ds, "d3");  // refs: d1, d2
  const TileCoord coord{0.5, 0.5};
  const ScoreVector predicted = predict_values(spec_of("sem-P"), ctx, coord);

  const Importance imp = canonical_importance(coord);
  for (const EntityId& entity : ds.entities()) {
    const std::size_t e = ds.entity_index(entity);
    std::array<double, 4> acc{0, 0, 0, 0};
    for (const SemanticLabel label : {SemanticLabel("sky"), SemanticLabel("road")}) {
      double wsum = 0.0;
      std::array<double, 4> pooled{0, 0, 0, 0};
      for (const DomainId& id : {DomainId("d1"), DomainId("d2")}) {
        const auto& d = ds.domain(id);
        const double w = ctx.weights.at(id) * d.semantic.p(label);
        wsum += w;
        for (std::size_t c = 0; c < 4; ++c) {
          pooled[c] += w * d.conditionals[e].at(label).mass()[c];
        }
      }
      for (std::size_t c = 0; c < 4; ++c) {
        acc[c] += ctx.test_semantic.p(label) * pooled[c] / wsum;
      }
    }
    CHECK(*predicted.value(entity) ==
          doctest::Approx(ranking_score(Performance(acc), imp)).epsilon(1e-12));
  }
}

TEST_CASE("sem-P without conditionals is unavailable") {
  SemanticDistribution sem({{"l", 1.0}});
  std::vector<DomainRecord> domains;
  domains.push_back({"d1", "c", sem, {perf(0.4, 0.1, 0.1, 0.4)}, {}});
  domains.push_back({"d2", "c", sem, {perf(0.3, 0.2, 0.2, 0.3)}, {}});
  const Dataset ds({"A"}, std::move(domains));
  CHECK_THROWS_AS(
      predict_values(spec_of("sem-P"), make_context(ds, "d1"), {0.5, 0.5}),
      StrategyUnavailable);
}

TEST_CASE("sem-P falls back to mean-P for labels unseen in the references") {
  const Dataset ds = fixture_dataset();
  StrategyContext ctx = make_context(ds, "d1");
  // The test domain is all made of a label no reference has seen.
  ctx.test_semantic = SemanticDistribution({{"lava", 1.0}});
  const Ranking sem = predict_ranking(spec_of("sem-P"), ctx, {0.4, 0.6});
  const Ranking mean = predict_ranking(spec_of("mean-P"), ctx, {0.4, 0.6});
  CHECK(sem == mean);
}

TEST_CASE("sem-P with a single label degenerates to mean-P") {
  SemanticDistribution sem({{"only", 1.0}});
  auto with_cond = [&](DomainId id, Performance p) {
    return DomainRecord{std::move(id), "c", sem, {p, perf(0.3, 0.2, 0.2, 0.3)},
                        {{{"only", p}}, {{"only", perf(0.3, 0.2, 0.2, 0.3)}}}};
  };
  std::vector<DomainRecord> domains;
  domains.push_back(with_cond("d1", perf(0.4, 0.1, 0.1, 0.4)));
  domains.push_back(with_cond("d2", perf(0.5, 0.1, 0.2, 0.2)));
  domains.push_back(with_cond("d3", perf(0.25, 0.25, 0.25, 0.25)));
  const Dataset ds({"A", "B"}, std::move(domains));
  const StrategyContext ctx = make_context(ds, "d3");
  for (const TileCoord coord : {TileCoord{0, 0}, TileCoord{0.5, 0.5},
                                TileCoord{1, 1}, TileCoord{0.2, 0.9}}) {
    CHECK(predict_ranking(spec_of("sem-P"), ctx, coord) ==
          predict_ranking(spec_of("mean-P"), ctx, coord));
  }
}

TEST_CASE("sem-d picks the semantically nearest reference") {
  const Dataset ds = fixture_dataset();

  SUBCASE("distance zero wins") {
    StrategyContext ctx = make_context(ds, "d3");
    ctx.test_semantic = ds.domain("d2").semantic;
    const ScoreVector predicted = predict_values(spec_of("sem-d"), ctx, {0.5, 0.5});
    const ScoreVector d2 =
        ground_truth_scores(ctx.references, ctx.references.domain("d2"), {0.5, 0.5});
    CHECK(predicted == d2);
  }
  SUBCASE("otherwise the smaller distance wins") {
    StrategyContext ctx = make_context(ds, "d1");  // refs d2 (sky .8), d3 (sky .1)
    ctx.test_semantic = SemanticDistribution({{"sky", 0.15}, {"road", 0.85}});
    const double dist2 = bhattacharyya_distance(ctx.test_semantic,
                                                ds.domain("d2").semantic);
    const double dist3 = bhattacharyya_distance(ctx.test_semantic,
                                                ds.domain("d3").semantic);
    REQUIRE(dist3 < dist2);
    const ScoreVector predicted = predict_values(spec_of("sem-d"), ctx, {0.5, 0.5});
    CHECK(predicted == ground_truth_scores(ctx.references,
                                           ctx.references.domain("d3"),
                                           {0.5, 0.5}));
  }
  SUBCASE("exact ties break toward the smaller domain id") {
    SemanticDistribution sem({{"l", 1.0}});
    std::vector<DomainRecord> domains;
    domains.push_back({"b", "c", sem, {perf(0.4, 0.1, 0.1, 0.4)}, {}});
    domains.push_back({"a", "c", sem, {perf(0.1, 0.4, 0.4, 0.1)}, {}});
    domains.push_back({"t", "c", sem, {perf(0.25, 0.25, 0.25, 0.25)}, {}});
    const Dataset tie({"A"}, std::move(domains));
    const StrategyContext ctx = make_context(tie, "t");
    const ScoreVector predicted = predict_values(spec_of("sem-d"), ctx, {0.5, 0.5});
    CHECK(*predicted.value("A") == doctest::Approx(0.2).epsilon(1e-12));
  }
}

TEST_CASE("value averaging strategies") {
  SemanticDistribution sem({{"l", 1.0}});
  std::vector<DomainRecord> domains;
  domains.push_back({"r1", "c", sem, {perf(0.1, 0.4, 0.4, 0.1)}, {}});  // score .2
  domains.push_back({"r2", "c", sem, {perf(0.3, 0.2, 0.2, 0.3)}, {}});  // score .6
  domains.push_back({"t", "c", sem, {perf(0.25, 0.25, 0.25, 0.25)}, {}});
  const Dataset ds({"A"}, std::move(domains));
  const StrategyContext ctx = make_context(ds, "t");
  CHECK(*predict_values(spec_of("mean-V"), ctx, {0.5, 0.5}).value("A") ==
        doctest::Approx(0.4).epsilon(1e-12));
  CHECK(*predict_values(spec_of("med-V"), ctx, {0.5, 0.5}).value("A") ==
        doctest::Approx(0.2).epsilon(1e-12));
}

TEST_CASE("rank averaging strategies") {
  const Dataset ds = fixture_dataset();
  const StrategyContext ctx = make_context(ds, "d3");

  SUBCASE("the override freezes the inducing preference point") {
    const StrategySpec frozen = spec_of("mean-R@0.5,0.3");
    const ScoreVector at_corner = predict_values(frozen, ctx, {0, 0});
    const ScoreVector at_center = predict_values(frozen, ctx, {0.5, 0.5});
    CHECK(at_corner == at_center);
  }
  SUBCASE("symmetric references tie under the mean") {
    SemanticDistribution sem({{"l", 1.0}});
    std::vector<DomainRecord> domains;
    domains.push_back({"r1", "c", sem,
                       {perf(0.4, 0.1, 0.1, 0.4), perf(0.3, 0.2, 0.2, 0.3)},
                       {}});
    domains.push_back({"r2", "c", sem,
                       {perf(0.3, 0.2, 0.2, 0.3), perf(0.4, 0.1, 0.1, 0.4)},
                       {}});
    domains.push_back({"t", "c", sem,
                       {perf(0.25, 0.25, 0.25, 0.25), perf(0.25, 0.25, 0.25, 0.25)},
                       {}});
    const Dataset sym({"A", "B"}, std::move(domains));
    const Ranking r = predict_ranking(spec_of("mean-R"),
                                      make_context(sym, "t"), {0.5, 0.5});
    CHECK(r.rank("A") == 1);
    CHECK(r.rank("B") == 1);
  }
}

TEST_CASE("a single-reference context makes averaging strategies agree") {
  const Dataset ds = fixture_dataset();
  StrategyContext ctx = apply_category_modifier(make_context(ds, "d1"));
  REQUIRE(ctx.references.domains().size() == 1);
  const Ranking truth = rank_from_scores(
      ground_truth_scores(ctx.references, ctx.references.domain("d2"),
                          {0.7, 0.2}));
  for (const char* name : {"mean-P", "mean-V", "mean-R", "med-V", "med-R"}) {
    CHECK(predict_ranking(spec_of(name), ctx, {0.7, 0.2}) == truth);
  }
}

TEST_CASE("combine over one sub-strategy preserves its ranking") {
  const Dataset ds = fixture_dataset();
  const StrategyContext ctx = make_context(ds, "d3");
  StrategySpec single;
  single.id = "avg(mean-V)";
  single.kind = StrategyKind::combine;
  single.sub_strategies.push_back(spec_of("mean-V"));
  for (const TileCoord coord : {TileCoord{0.1, 0.9}, TileCoord{0.5, 0.5},
                                TileCoord{1, 1}}) {
    CHECK(predict_ranking(single, ctx, coord) ==
          predict_ranking(spec_of("mean-V"), ctx, coord));
  }
}

TEST_CASE("combine over identical subs equals the single sub") {
  const Dataset ds = fixture_dataset();
  const StrategyContext ctx = make_context(ds, "d3");
  const StrategySpec twin = spec_of("avg(mean-V,mean-V)");
  CHECK(predict_ranking(twin, ctx, {0.3, 0.6}) ==
        predict_ranking(spec_of("mean-V"), ctx, {0.3, 0.6}));
}

TEST_CASE("combine matches the step-by-step conversion arithmetic") {
  const Dataset ds = fixture_dataset();
  const StrategyContext ctx = make_context(ds, "d3");
  const TileCoord coord{0.5, 0.5};
  const StrategySpec combo = spec_of("avg(fixed,mean-V)");
  const ScoreVector got = predict_values(combo, ctx, coord);

  const Importance imp = canonical_importance(coord);
  const ScoreVector vf = predict_values(spec_of("fixed"), ctx, coord);
  const ScoreVector vm = predict_values(spec_of("mean-V"), ctx, coord);
  auto span = [](const ScoreVector& v) {
    double lo = *v.value(0), hi = *v.value(0);
    for (std::size_t i = 1; i < v.size(); ++i) {
      lo = std::min(lo, *v.value(i));
      hi = std::max(hi, *v.value(i));
    }
    return std::pair(lo, hi);
  };
  const auto [fl, fu] = span(vf);
  const auto [ml, mu] = span(vm);
  for (std::size_t i = 0; i < got.size(); ++i) {
    const Performance converted_f = value_to_performance(*vf.value(i), fl, fu);
    const Performance converted_m = value_to_performance(*vm.value(i), ml, mu);
    const Performance mixed =
        mix_performances({{converted_f, 1.0}, {converted_m, 1.0}});
    CHECK(*got.value(i) ==
          doctest::Approx(ranking_score(mixed, imp)).epsilon(1e-12));
  }
}

TEST_CASE("combine propagates unavailability of a sub-strategy") {
  SemanticDistribution sem({{"l", 1.0}});
  std::vector<DomainRecord> domains;
  domains.push_back({"d1", "c", sem, {perf(0.4, 0.1, 0.1, 0.4)}, {}});
  domains.push_back({"d2", "c", sem, {perf(0.3, 0.2, 0.2, 0.3)}, {}});
  const Dataset ds({"A"}, std::move(domains));  // no conditionals, no leaderboard
  const StrategyContext ctx = make_context(ds, "d1");
  CHECK_THROWS_AS(predict_values(spec_of("avg(mean-P,sem-P)"), ctx, {0.5, 0.5}),
                  StrategyUnavailable);
}

TEST_CASE("perfect data is recovered by every LODO strategy") {
  // Strategies built on the fixed leaderboard stay out: that ranking is a
  // single global order, not the per-preference truth.
  const Dataset flat = synth_dataset(4, 6, 2, 3, 0.0, 3);
  for (const char* name : {"mean-P", "sem-P", "sem-d", "mean-V", "mean-R",
                           "med-V", "med-R", "avg(mean-P,mean-V)"}) {
    const StrategySpec spec = spec_of(name);
    for (const auto& domain : flat.domains()) {
      const StrategyContext ctx = make_context(flat, domain.id);
      for (const TileCoord coord : make_grid(5)) {
        const Ranking predicted = predict_ranking(spec, ctx, coord);
        const Ranking truth =
            rank_from_scores(ground_truth_scores(flat, domain, coord));
        CHECK(predicted == truth);
      }
    }
  }
}

TEST_SUITE_END();
