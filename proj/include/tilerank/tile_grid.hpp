#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "tilerank/errors.hpp"
#include "tilerank/performance.hpp"

namespace tilerank {

/// Exact lattice coordinate of cell (i, j) at the given resolution:
/// a = i/(resolution-1), b = j/(resolution-1). Every consumer of the lattice
/// goes through this helper so that grids and their serializations agree
/// bit-for-bit.
inline TileCoord lattice_coord(int i, int j, int resolution) {
  const double d = static_cast<double>(resolution - 1);
  return {static_cast<double>(i) / d, static_cast<double>(j) / d};
}

/// An inclusive row-major lattice over the preference square. Cells may be
/// empty (an error marker: the value could not be computed at that point).
template <typename T>
class TileGrid {
 public:
  using Cell = std::optional<T>;

  /// Empty placeholder (no cells); assign a real grid before use.
  TileGrid() = default;

  TileGrid(int resolution, std::vector<Cell> cells)
      : resolution_(resolution), cells_(std::move(cells)) {
    if (resolution_ < 2) {
      throw ResolutionTooSmall("tile resolution must be at least 2");
    }
    if (cells_.size() != cell_count()) {
      throw InvalidParams("cell count does not match resolution");
    }
  }

  static TileGrid filled(int resolution, T value) {
    if (resolution < 2) {
      throw ResolutionTooSmall("tile resolution must be at least 2");
    }
    return TileGrid(resolution,
                    std::vector<Cell>(static_cast<std::size_t>(resolution) *
                                          static_cast<std::size_t>(resolution),
                                      Cell(std::move(value))));
  }

  int resolution() const { return resolution_; }
  std::size_t cell_count() const {
    return static_cast<std::size_t>(resolution_) *
           static_cast<std::size_t>(resolution_);
  }

  TileCoord coord(int i, int j) const { return lattice_coord(i, j, resolution_); }
  TileCoord coord_at(std::size_t index) const {
    const int res = resolution_;
    return lattice_coord(static_cast<int>(index) % res,
                         static_cast<int>(index) / res, res);
  }

  const Cell& at(int i, int j) const {
    return cells_[static_cast<std::size_t>(j) * resolution_ + i];
  }
  const Cell& at_index(std::size_t index) const { return cells_[index]; }
  const std::vector<Cell>& cells() const { return cells_; }

  bool operator==(const TileGrid&) const = default;

 private:
  int resolution_ = 0;
  std::vector<Cell> cells_;  // index = j * resolution + i
};

using ValueTile = TileGrid<double>;
using LabelTile = TileGrid<std::string>;

/// Row-major list of all lattice coordinates at a resolution.
std::vector<TileCoord> make_grid(int resolution);

namespace detail {
template <typename Raw, bool IsOptional>
struct map_tile_value {
  using type = std::decay_t<Raw>;
};
template <typename Raw>
struct map_tile_value<Raw, true> {
  using type = typename std::decay_t<Raw>::value_type;
};
}  // namespace detail

/// Evaluates f at every lattice point. f may return std::optional<T> (empty =
/// error cell) or T directly; a thrown tilerank::Error also marks the cell as
/// an error instead of aborting the grid.
template <typename F>
auto map_tile(int resolution, F&& f) {
  using Raw = std::invoke_result_t<F&, TileCoord>;
  constexpr bool returns_optional = requires(Raw r) { r.has_value(); *r; };
  using T = typename detail::map_tile_value<Raw, returns_optional>::type;
  if (resolution < 2) {
    throw ResolutionTooSmall("tile resolution must be at least 2");
  }
  std::vector<std::optional<T>> cells;
  cells.reserve(static_cast<std::size_t>(resolution) * resolution);
  for (int j = 0; j < resolution; ++j) {
    for (int i = 0; i < resolution; ++i) {
      const TileCoord c = lattice_coord(i, j, resolution);
      try {
        if constexpr (returns_optional) {
          cells.emplace_back(f(c));
        } else {
          cells.emplace_back(std::optional<T>(f(c)));
        }
      } catch (const Error&) {
        cells.emplace_back(std::nullopt);
      }
    }
  }
  return TileGrid<T>(resolution, std::move(cells));
}

enum class ReduceMode { mean, min };

/// Cell-wise mean or minimum across grids. Error cells are excluded from the
/// reduction; a cell stays an error only when every input errs there.
ValueTile reduce_tiles(const std::vector<ValueTile>& grids, ReduceMode mode);

/// Cell-wise weighted mean; inputs with error cells drop out of that cell
/// (their weight is renormalized away).
ValueTile weighted_mean_tiles(const std::vector<ValueTile>& grids,
                              const std::vector<double>& weights);

/// Cell-wise id of the grid with the largest value; ties go to the earliest
/// entry in the list.
LabelTile argmax_tile(
    const std::vector<std::pair<std::string, ValueTile>>& named);

/// Fraction of lattice cells selecting the given id.
double tile_area_fraction(const LabelTile& selection, const std::string& id);

/// Tile CSV: header "a,b,value", rows in row-major lattice order, reals with
/// 17 significant digits; error cells carry the literal "error"; label values
/// are quoted per RFC 4180 when they contain a comma or quote.
void write_tile_csv(const ValueTile& tile, std::ostream& out);
void write_tile_csv(const LabelTile& tile, std::ostream& out);
void write_tile_csv(const ValueTile& tile, const std::filesystem::path& path);
void write_tile_csv(const LabelTile& tile, const std::filesystem::path& path);

ValueTile read_value_tile_csv(const std::filesystem::path& path);

/// 17-significant-digit representation used by every CSV writer.
std::string format_real(double v);

}  // namespace tilerank
