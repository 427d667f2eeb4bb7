#include "tilerank/render.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>

namespace tilerank {
namespace {

// Distinct hues for categorical (strategy-selection) tiles.
constexpr std::array<Rgb, 10> kPalette{{
    {31, 119, 180}, {255, 127, 14}, {44, 160, 44}, {214, 39, 40},
    {148, 103, 189}, {140, 86, 75}, {227, 119, 194}, {127, 127, 127},
    {188, 189, 34}, {23, 190, 207},
}};

std::uint8_t lerp_channel(std::uint8_t from, std::uint8_t to, double t) {
  return static_cast<std::uint8_t>(
      std::lround(static_cast<double>(from) +
                  t * (static_cast<double>(to) - static_cast<double>(from))));
}

std::ofstream open_binary(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path.string() + "' for writing");
  }
  return out;
}

void check_scale(int scale) {
  if (scale < 1) {
    throw InvalidParams("pixel scale must be at least 1");
  }
}

template <typename CellColor>
Image rasterize(int resolution, int scale, CellColor&& color_of) {
  Image img;
  img.width = resolution * scale;
  img.height = resolution * scale;
  img.pixels.resize(static_cast<std::size_t>(img.width) * img.height);
  for (int j = 0; j < resolution; ++j) {
    for (int i = 0; i < resolution; ++i) {
      const Rgb color = color_of(i, j);
      // b grows upward: lattice row j lands scale rows above the bottom.
      const int top = (resolution - 1 - j) * scale;
      for (int dy = 0; dy < scale; ++dy) {
        for (int dx = 0; dx < scale; ++dx) {
          img.pixels[static_cast<std::size_t>(top + dy) * img.width +
                     i * scale + dx] = color;
        }
      }
    }
  }
  return img;
}

// CRC-32 (PNG polynomial) and Adler-32 for the store-only PNG writer.

std::uint32_t crc32(const std::uint8_t* data, std::size_t len,
                    std::uint32_t crc = 0xffffffffu) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t n = 0; n < 256; ++n) {
      std::uint32_t c = n;
      for (int k = 0; k < 8; ++k) {
        c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
      }
      t[n] = c;
    }
    return t;
  }();
  for (std::size_t i = 0; i < len; ++i) {
    crc = table[(crc ^ data[i]) & 0xffu] ^ (crc >> 8);
  }
  return crc;
}

std::uint32_t adler32(const std::vector<std::uint8_t>& data) {
  std::uint32_t a = 1, b = 0;
  for (std::uint8_t byte : data) {
    a = (a + byte) % 65521u;
    b = (b + a) % 65521u;
  }
  return (b << 16) | a;
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_chunk(std::vector<std::uint8_t>& out, const char type[4],
               const std::vector<std::uint8_t>& payload) {
  put_u32(out, static_cast<std::uint32_t>(payload.size()));
  std::vector<std::uint8_t> body(type, type + 4);
  body.insert(body.end(), payload.begin(), payload.end());
  out.insert(out.end(), body.begin(), body.end());
  put_u32(out, crc32(body.data(), body.size()) ^ 0xffffffffu);
}

}  // namespace

Rgb Colormap::at(double value) const {
  if (anchors.empty()) return error_color;
  if (value <= anchors.front().first) return anchors.front().second;
  if (value >= anchors.back().first) return anchors.back().second;
  for (std::size_t i = 1; i < anchors.size(); ++i) {
    if (value > anchors[i].first) continue;
    const auto& [v0, c0] = anchors[i - 1];
    const auto& [v1, c1] = anchors[i];
    const double t = (value - v0) / (v1 - v0);
    return {lerp_channel(c0.r, c1.r, t), lerp_channel(c0.g, c1.g, t),
            lerp_channel(c0.b, c1.b, t)};
  }
  return anchors.back().second;
}

Colormap colormap_by_name(const std::string& name) {
  if (name == "redgreen") {
    return Colormap{"redgreen",
                    {{-1.0, {255, 0, 0}}, {0.0, {255, 255, 255}},
                     {1.0, {0, 255, 0}}}};
  }
  if (name == "grayscale") {
    return Colormap{"grayscale", {{-1.0, {0, 0, 0}}, {1.0, {255, 255, 255}}}};
  }
  throw InvalidParams("unknown colormap '" + name +
                      "' (available: redgreen, grayscale)");
}

Image render_tile(const ValueTile& tile, const Colormap& cmap, int scale) {
  check_scale(scale);
  return rasterize(tile.resolution(), scale, [&](int i, int j) {
    const auto& cell = tile.at(i, j);
    return cell ? cmap.at(*cell) : cmap.error_color;
  });
}

Image render_label_tile(const LabelTile& tile,
                        const std::vector<std::string>& id_order, int scale) {
  check_scale(scale);
  const Rgb error_color{128, 128, 128};
  return rasterize(tile.resolution(), scale, [&](int i, int j) {
    const auto& cell = tile.at(i, j);
    if (!cell) return error_color;
    const auto it = std::find(id_order.begin(), id_order.end(), *cell);
    if (it == id_order.end()) return error_color;
    return kPalette[static_cast<std::size_t>(it - id_order.begin()) %
                    kPalette.size()];
  });
}

void write_ppm(const Image& image, const std::filesystem::path& path) {
  auto out = open_binary(path);
  out << "P6\n" << image.width << " " << image.height << "\n255\n";
  for (const Rgb& px : image.pixels) {
    out.put(static_cast<char>(px.r));
    out.put(static_cast<char>(px.g));
    out.put(static_cast<char>(px.b));
  }
  if (!out) {
    throw IoError("failed writing '" + path.string() + "'");
  }
}

void write_png(const Image& image, const std::filesystem::path& path) {
  // Filtered stream: every scanline prefixed with filter type 0.
  std::vector<std::uint8_t> raw;
  raw.reserve(static_cast<std::size_t>(image.height) *
              (1 + 3 * static_cast<std::size_t>(image.width)));
  for (int y = 0; y < image.height; ++y) {
    raw.push_back(0);
    for (int x = 0; x < image.width; ++x) {
      const Rgb& px =
          image.pixels[static_cast<std::size_t>(y) * image.width + x];
      raw.push_back(px.r);
      raw.push_back(px.g);
      raw.push_back(px.b);
    }
  }

  // zlib stream with store-only deflate blocks of at most 65535 bytes.
  std::vector<std::uint8_t> idat;
  idat.push_back(0x78);
  idat.push_back(0x01);
  std::size_t pos = 0;
  do {
    const std::size_t len = std::min<std::size_t>(raw.size() - pos, 65535);
    const bool final = pos + len == raw.size();
    idat.push_back(final ? 1 : 0);
    idat.push_back(static_cast<std::uint8_t>(len & 0xff));
    idat.push_back(static_cast<std::uint8_t>(len >> 8));
    idat.push_back(static_cast<std::uint8_t>(~len & 0xff));
    idat.push_back(static_cast<std::uint8_t>((~len >> 8) & 0xff));
    idat.insert(idat.end(), raw.begin() + pos, raw.begin() + pos + len);
    pos += len;
  } while (pos < raw.size());
  put_u32(idat, adler32(raw));

  std::vector<std::uint8_t> ihdr;
  put_u32(ihdr, static_cast<std::uint32_t>(image.width));
  put_u32(ihdr, static_cast<std::uint32_t>(image.height));
  ihdr.push_back(8);  // bit depth
  ihdr.push_back(2);  // truecolor
  ihdr.push_back(0);
  ihdr.push_back(0);
  ihdr.push_back(0);

  std::vector<std::uint8_t> file{0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  put_chunk(file, "IHDR", ihdr);
  put_chunk(file, "IDAT", idat);
  put_chunk(file, "IEND", {});

  auto out = open_binary(path);
  out.write(reinterpret_cast<const char*>(file.data()),
            static_cast<std::streamsize>(file.size()));
  if (!out) {
    throw IoError("failed writing '" + path.string() + "'");
  }
}

void export_rank_layers(const std::vector<EntityId>& entities,
                        const std::function<Ranking(TileCoord)>& ranking_at,
                        int resolution, const std::filesystem::path& out_dir) {
  if (resolution < 2) {
    throw ResolutionTooSmall("tile resolution must be at least 2");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    throw IoError("cannot create '" + out_dir.string() + "': " + ec.message());
  }

  const std::size_t count =
      static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution);
  std::vector<std::vector<std::optional<double>>> layers(
      entities.size(), std::vector<std::optional<double>>(count));
  for (int j = 0; j < resolution; ++j) {
    for (int i = 0; i < resolution; ++i) {
      const std::size_t k = static_cast<std::size_t>(j) * resolution + i;
      try {
        const Ranking ranking = ranking_at(lattice_coord(i, j, resolution));
        for (std::size_t e = 0; e < entities.size(); ++e) {
          layers[e][k] = static_cast<double>(ranking.rank(entities[e]));
        }
      } catch (const Error&) {
        // cells stay error markers for every entity
      }
    }
  }
  for (std::size_t e = 0; e < entities.size(); ++e) {
    write_tile_csv(ValueTile(resolution, std::move(layers[e])),
                   out_dir / (entities[e] + ".csv"));
  }
}

}  // namespace tilerank
