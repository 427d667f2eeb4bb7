#pragma once

#include <array>
#include <string_view>
#include <utility>
#include <vector>

#include "tilerank/errors.hpp"

namespace tilerank {

// The four two-class classification outcomes, in canonical order.
enum class Outcome : int { tn = 0, fp = 1, fn = 2, tp = 3 };

inline constexpr std::array<Outcome, 4> kOutcomes{Outcome::tn, Outcome::fp,
                                                  Outcome::fn, Outcome::tp};

std::string_view outcome_name(Outcome o);

/// A probability mass over the four outcomes. Sums within 1e-9 of one are
/// accepted (and renormalized); anything further off is rejected.
class Performance {
 public:
  static constexpr double kSumTolerance = 1e-9;

  Performance(double tn, double fp, double fn, double tp);
  explicit Performance(const std::array<double, 4>& mass);

  double p(Outcome o) const { return p_[static_cast<std::size_t>(o)]; }
  double tn() const { return p_[0]; }
  double fp() const { return p_[1]; }
  double fn() const { return p_[2]; }
  double tp() const { return p_[3]; }
  const std::array<double, 4>& mass() const { return p_; }

  bool operator==(const Performance&) const = default;

 private:
  std::array<double, 4> p_;
};

/// Non-negative outcome weights expressing application-specific preferences.
/// Each of the pairs {tn,tp} and {fp,fn} keeps at least one positive weight,
/// otherwise the preference-square coordinates are undefined.
class Importance {
 public:
  Importance(double tn, double fp, double fn, double tp);

  double w(Outcome o) const { return w_[static_cast<std::size_t>(o)]; }
  double tn() const { return w_[0]; }
  double fp() const { return w_[1]; }
  double fn() const { return w_[2]; }
  double tp() const { return w_[3]; }
  const std::array<double, 4>& weights() const { return w_; }

  bool operator==(const Importance&) const = default;

 private:
  std::array<double, 4> w_;
};

/// A point of the preference square ("Tile"): a weighs tp against tn,
/// b weighs fn against fp. Both coordinates live in [0,1].
struct TileCoord {
  double a = 0.0;
  double b = 0.0;
  bool operator==(const TileCoord&) const = default;
};

/// The parametric ranking score: importance-weighted correct mass over
/// importance-weighted total mass. Always in [0,1].
/// Throws UndefinedScore when the weighted total mass is zero.
double ranking_score(const Performance& perf, const Importance& imp);

/// Collapses an importance to its preference-square coordinates
/// a = w(tp)/(w(tn)+w(tp)), b = w(fn)/(w(fp)+w(fn)).
TileCoord tile_coords(const Importance& imp);

/// The representative importance (1-a, 1-b, b, a) for a square point.
Importance canonical_importance(TileCoord coord);

/// Embeds a plain value v in [l,u] as a performance whose ranking score is
/// strictly increasing in v for every importance.
Performance value_to_performance(double v, double l, double u);

/// Convex combination of performances; weights are normalized to sum one.
Performance mix_performances(
    const std::vector<std::pair<Performance, double>>& items);

}  // namespace tilerank
