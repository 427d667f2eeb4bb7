#include "tilerank/tile_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tilerank {
namespace {

void check_uniform_resolution(const std::vector<ValueTile>& grids,
                              const char* what) {
  if (grids.empty()) {
    throw EmptyList(std::string(what) + ": no grids given");
  }
  for (const auto& g : grids) {
    if (g.resolution() != grids.front().resolution()) {
      throw ResolutionMismatch(std::string(what) + ": grids differ in resolution");
    }
  }
}

template <typename T>
void write_csv_impl(const TileGrid<T>& tile, std::ostream& out) {
  out << "a,b,value\n";
  const int res = tile.resolution();
  for (int j = 0; j < res; ++j) {
    for (int i = 0; i < res; ++i) {
      const TileCoord c = tile.coord(i, j);
      out << format_real(c.a) << ',' << format_real(c.b) << ',';
      const auto& cell = tile.at(i, j);
      if (!cell) {
        out << "error";
      } else if constexpr (std::is_same_v<T, double>) {
        out << format_real(*cell);
      } else {
        const std::string& v = *cell;
        if (v.find_first_of(",\"\n") != std::string::npos) {
          out << '"';
          for (char ch : v) {
            if (ch == '"') out << '"';
            out << ch;
          }
          out << '"';
        } else {
          out << v;
        }
      }
      out << '\n';
    }
  }
}

template <typename T>
void write_csv_file(const TileGrid<T>& tile, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  write_csv_impl(tile, out);
  if (!out) {
    throw IoError("failed writing '" + path.string() + "'");
  }
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<TileCoord> make_grid(int resolution) {
  if (resolution < 2) {
    throw ResolutionTooSmall("tile resolution must be at least 2");
  }
  std::vector<TileCoord> coords;
  coords.reserve(static_cast<std::size_t>(resolution) * resolution);
  for (int j = 0; j < resolution; ++j) {
    for (int i = 0; i < resolution; ++i) {
      coords.push_back(lattice_coord(i, j, resolution));
    }
  }
  return coords;
}

ValueTile reduce_tiles(const std::vector<ValueTile>& grids, ReduceMode mode) {
  check_uniform_resolution(grids, "reduce_tiles");
  const int res = grids.front().resolution();
  const std::size_t count = grids.front().cell_count();
  std::vector<std::optional<double>> cells(count);
  for (std::size_t k = 0; k < count; ++k) {
    double acc = 0.0;
    std::size_t n = 0;
    for (const auto& g : grids) {
      const auto& cell = g.at_index(k);
      if (!cell) continue;
      if (mode == ReduceMode::mean) {
        acc += *cell;
      } else {
        acc = (n == 0) ? *cell : std::min(acc, *cell);
      }
      ++n;
    }
    if (n > 0) {
      cells[k] = (mode == ReduceMode::mean) ? acc / static_cast<double>(n) : acc;
    }
  }
  return ValueTile(res, std::move(cells));
}

ValueTile weighted_mean_tiles(const std::vector<ValueTile>& grids,
                              const std::vector<double>& weights) {
  check_uniform_resolution(grids, "weighted_mean_tiles");
  if (weights.size() != grids.size()) {
    throw InvalidParams("weighted_mean_tiles: one weight per grid required");
  }
  for (double w : weights) {
    if (w < 0.0 || std::isnan(w)) {
      throw InvalidParams("weighted_mean_tiles: weights must be non-negative");
    }
  }
  const int res = grids.front().resolution();
  const std::size_t count = grids.front().cell_count();
  std::vector<std::optional<double>> cells(count);
  for (std::size_t k = 0; k < count; ++k) {
    double num = 0.0, den = 0.0;
    for (std::size_t g = 0; g < grids.size(); ++g) {
      const auto& cell = grids[g].at_index(k);
      if (!cell || weights[g] <= 0.0) continue;
      num += weights[g] * *cell;
      den += weights[g];
    }
    if (den > 0.0) cells[k] = num / den;
  }
  return ValueTile(res, std::move(cells));
}

LabelTile argmax_tile(
    const std::vector<std::pair<std::string, ValueTile>>& named) {
  if (named.empty()) {
    throw EmptyList("argmax_tile: no grids given");
  }
  const int res = named.front().second.resolution();
  for (const auto& [_, g] : named) {
    if (g.resolution() != res) {
      throw ResolutionMismatch("argmax_tile: grids differ in resolution");
    }
  }
  const std::size_t count = named.front().second.cell_count();
  std::vector<std::optional<std::string>> cells(count);
  for (std::size_t k = 0; k < count; ++k) {
    const std::string* best_id = nullptr;
    double best = 0.0;
    for (const auto& [id, g] : named) {
      const auto& cell = g.at_index(k);
      if (!cell) continue;
      if (best_id == nullptr || *cell > best) {
        best_id = &id;
        best = *cell;
      }
    }
    if (best_id != nullptr) cells[k] = *best_id;
  }
  return LabelTile(res, std::move(cells));
}

double tile_area_fraction(const LabelTile& selection, const std::string& id) {
  std::size_t hits = 0;
  for (const auto& cell : selection.cells()) {
    if (cell && *cell == id) ++hits;
  }
  return static_cast<double>(hits) /
         static_cast<double>(selection.cell_count());
}

void write_tile_csv(const ValueTile& tile, std::ostream& out) {
  write_csv_impl(tile, out);
}
void write_tile_csv(const LabelTile& tile, std::ostream& out) {
  write_csv_impl(tile, out);
}
void write_tile_csv(const ValueTile& tile, const std::filesystem::path& path) {
  write_csv_file(tile, path);
}
void write_tile_csv(const LabelTile& tile, const std::filesystem::path& path) {
  write_csv_file(tile, path);
}

ValueTile read_value_tile_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path.string() + "'");
  }
  std::string line;
  if (!std::getline(in, line) || (line != "a,b,value" && line != "a,b,value\r")) {
    throw ParseError("'" + path.string() + "': missing a,b,value header");
  }
  std::vector<std::optional<double>> cells;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c1 = line.find(',');
    const auto c2 = (c1 == std::string::npos) ? std::string::npos
                                              : line.find(',', c1 + 1);
    if (c2 == std::string::npos) {
      throw ParseError("'" + path.string() + "' line " + std::to_string(lineno) +
                       ": expected a,b,value");
    }
    const std::string value = line.substr(c2 + 1);
    if (value == "error") {
      cells.emplace_back(std::nullopt);
      continue;
    }
    std::size_t consumed = 0;
    double v = 0.0;
    try {
      v = std::stod(value, &consumed);
    } catch (const std::exception&) {
      consumed = 0;
    }
    if (consumed != value.size() || value.empty()) {
      throw ParseError("'" + path.string() + "' line " + std::to_string(lineno) +
                       ": not a real value: '" + value + "'");
    }
    cells.emplace_back(v);
  }
  const auto n = cells.size();
  const int res = static_cast<int>(std::llround(std::sqrt(static_cast<double>(n))));
  if (res < 2 || static_cast<std::size_t>(res) * res != n) {
    throw ParseError("'" + path.string() + "': " + std::to_string(n) +
                     " rows do not form a square lattice");
  }
  return ValueTile(res, std::move(cells));
}

}  // namespace tilerank
