#include "tilerank/performance.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace tilerank {
namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// Renormalization is skipped when the sum is already within 1e-12 of one so
// that reloading saved data is bit-stable (a second normalization of an
// already-normalized mass would perturb the last bits).
std::array<double, 4> normalized_mass(const std::array<double, 4>& mass) {
  double sum = 0.0;
  for (double v : mass) {
    if (v < 0.0 || std::isnan(v)) {
      throw InvalidPerformance("performance mass must be non-negative, got " + fmt(v));
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > Performance::kSumTolerance) {
    throw InvalidPerformance("performance mass sums to " + fmt(sum) +
                             ", expected 1 within " + fmt(Performance::kSumTolerance));
  }
  std::array<double, 4> out = mass;
  if (std::abs(sum - 1.0) > 1e-12) {
    for (double& v : out) v /= sum;
  }
  return out;
}

}  // namespace

std::string_view outcome_name(Outcome o) {
  switch (o) {
    case Outcome::tn: return "tn";
    case Outcome::fp: return "fp";
    case Outcome::fn: return "fn";
    case Outcome::tp: return "tp";
  }
  return "?";
}

Performance::Performance(double tn, double fp, double fn, double tp)
    : p_(normalized_mass({tn, fp, fn, tp})) {}

Performance::Performance(const std::array<double, 4>& mass)
    : p_(normalized_mass(mass)) {}

Importance::Importance(double tn, double fp, double fn, double tp)
    : w_{tn, fp, fn, tp} {
  for (double v : w_) {
    if (v < 0.0 || std::isnan(v)) {
      throw InvalidImportance("importance weights must be non-negative, got " + fmt(v));
    }
  }
  if (w_[0] + w_[3] <= 0.0) {
    throw InvalidImportance("importance needs a positive weight on tn or tp");
  }
  if (w_[1] + w_[2] <= 0.0) {
    throw InvalidImportance("importance needs a positive weight on fp or fn");
  }
}

double ranking_score(const Performance& perf, const Importance& imp) {
  const double num = imp.tn() * perf.tn() + imp.tp() * perf.tp();
  const double den = num + imp.fp() * perf.fp() + imp.fn() * perf.fn();
  if (den <= 0.0) {
    throw UndefinedScore("ranking score undefined: no probability mass on outcomes with positive importance");
  }
  return num / den;
}

TileCoord tile_coords(const Importance& imp) {
  return {imp.tp() / (imp.tn() + imp.tp()), imp.fn() / (imp.fp() + imp.fn())};
}

Importance canonical_importance(TileCoord coord) {
  if (!(coord.a >= 0.0 && coord.a <= 1.0 && coord.b >= 0.0 && coord.b <= 1.0)) {
    throw OutOfRange("tile coordinates must lie in [0,1]^2, got (" + fmt(coord.a) +
                     ", " + fmt(coord.b) + ")");
  }
  return Importance(1.0 - coord.a, 1.0 - coord.b, coord.b, coord.a);
}

Performance value_to_performance(double v, double l, double u) {
  if (!(l < u)) {
    throw InvalidRange("value range requires l < u, got [" + fmt(l) + ", " + fmt(u) + "]");
  }
  if (v < l || v > u) {
    throw OutOfRange("value " + fmt(v) + " outside [" + fmt(l) + ", " + fmt(u) + "]");
  }
  const double x = (v - l) / (u - l);
  const double y = (u - v) / (u - l);
  return Performance(0.5 * x, 0.5 * y, 0.5 * y, 0.5 * x);
}

Performance mix_performances(
    const std::vector<std::pair<Performance, double>>& items) {
  if (items.empty()) {
    throw EmptyList("mix_performances needs at least one performance");
  }
  double total = 0.0;
  for (const auto& [perf, w] : items) {
    (void)perf;
    if (w < 0.0 || std::isnan(w)) {
      throw InvalidParams("mix weight must be non-negative, got " + fmt(w));
    }
    total += w;
  }
  if (total <= 0.0) {
    throw AllZeroWeights("mix_performances needs a positive weight");
  }
  // Normalize the weights first so a single-item mix is the exact identity.
  std::array<double, 4> acc{0.0, 0.0, 0.0, 0.0};
  for (const auto& [perf, w] : items) {
    const double nw = w / total;
    if (nw == 0.0) continue;
    for (std::size_t c = 0; c < 4; ++c) acc[c] += nw * perf.mass()[c];
  }
  return Performance(acc);
}

}  // namespace tilerank
