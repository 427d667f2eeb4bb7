#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "tilerank/dataset.hpp"
#include "tilerank/tile_grid.hpp"

namespace tilerank {

struct Rgb {
  std::uint8_t r = 0, g = 0, b = 0;
  bool operator==(const Rgb&) const = default;
};

/// Piecewise-linear colormap over anchor values; inputs outside the anchor
/// span are clamped, error cells render in a neutral color.
struct Colormap {
  std::string name;
  std::vector<std::pair<double, Rgb>> anchors;  // sorted by value
  Rgb error_color{128, 128, 128};

  Rgb at(double value) const;
};

/// Named colormaps: "redgreen" (the correlation default: -1 red, 0 white,
/// +1 green) and "grayscale" (-1 black, +1 white).
Colormap colormap_by_name(const std::string& name);

struct Image {
  int width = 0;
  int height = 0;
  std::vector<Rgb> pixels;  // row-major, top row first
};

/// Rasterizes a tile, one scale x scale block per cell, with the cell
/// (a=0, b=0) in the bottom-left corner.
Image render_tile(const ValueTile& tile, const Colormap& cmap, int scale = 1);

/// Rasterizes a label tile with a categorical palette indexed by each id's
/// position in id_order (wrapping past the palette size).
Image render_label_tile(const LabelTile& tile,
                        const std::vector<std::string>& id_order,
                        int scale = 1);

/// Binary PPM (P6). Byte-exact for identical images.
void write_ppm(const Image& image, const std::filesystem::path& path);

/// PNG with store-only deflate blocks; no codec dependence, byte-exact for
/// identical images.
void write_png(const Image& image, const std::filesystem::path& path);

/// One rank-layer tile CSV per entity: the entity's rank at every lattice
/// point under ranking_at. Files are named <entity>.csv inside out_dir.
void export_rank_layers(const std::vector<EntityId>& entities,
                        const std::function<Ranking(TileCoord)>& ranking_at,
                        int resolution, const std::filesystem::path& out_dir);

}  // namespace tilerank
