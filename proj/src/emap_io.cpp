#include "tnav/emap_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "serial.hpp"
#include "tnav/error.hpp"

namespace tnav {

namespace {
constexpr char kMagic[4] = {'E', 'M', 'A', 'P'};
constexpr std::uint16_t kVersion = 1;
}  // namespace

void write_emap(const ElevationMap& map, const std::string& path) {
  serial::Writer w(path);
  w.magic(kMagic);
  w.u16(kVersion);
  w.u32(static_cast<std::uint32_t>(map.height_cells));
  w.u32(static_cast<std::uint32_t>(map.width_cells));
  w.f64(map.resolution);
  w.f64(map.origin_x);
  w.f64(map.origin_y);
  for (const double h : map.heights) w.f64(h);
  w.bytes(map.unknown.data(), map.unknown.size());
  w.close();
}

ElevationMap read_emap(const std::string& path) {
  serial::Reader r(path);
  r.expect_magic(kMagic);
  const std::uint16_t version = r.u16("version");
  if (version != kVersion) {
    throw FormatError("unsupported EMAP version " + std::to_string(version) + " in " + path);
  }
  const std::uint32_t h = r.u32("height_cells");
  const std::uint32_t w = r.u32("width_cells");
  if (h < 2 || w < 2 || h > (1u << 20) || w > (1u << 20)) {
    throw FormatError("implausible EMAP dimensions in " + path);
  }
  const double res = r.f64("resolution");
  const double ox = r.f64("origin_x");
  const double oy = r.f64("origin_y");
  const std::size_t cells = static_cast<std::size_t>(h) * w;
  std::vector<double> heights(cells);
  for (std::size_t i = 0; i < cells; ++i) heights[i] = r.f64("heights");
  std::vector<std::uint8_t> unknown(cells);
  r.bytes(unknown.data(), cells, "unknown mask");
  return make_elevation_map(static_cast<int>(h), static_cast<int>(w), res, ox, oy,
                            std::move(heights), std::move(unknown));
}

ElevationMap read_emap_csv(const std::string& path, double resolution, double origin_x,
                           double origin_y) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open CSV: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      const auto b = tok.find_first_not_of(" \t\r");
      if (b == std::string::npos || tok.substr(b, 3) == "nan") {
        row.push_back(std::numeric_limits<double>::quiet_NaN());
      } else {
        try {
          row.push_back(std::stod(tok));
        } catch (const std::exception&) {
          throw FormatError("bad CSV field '" + tok + "' in " + path);
        }
      }
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.size() < 2) throw FormatError("CSV map needs at least 2 rows: " + path);
  const std::size_t w = rows[0].size();
  for (const auto& row : rows) {
    if (row.size() != w) throw FormatError("ragged CSV rows in " + path);
  }
  std::vector<double> heights;
  std::vector<std::uint8_t> unknown;
  heights.reserve(rows.size() * w);
  unknown.reserve(rows.size() * w);
  for (const auto& row : rows) {
    for (const double v : row) {
      heights.push_back(v);
      unknown.push_back(std::isfinite(v) ? 0 : 1);
    }
  }
  return make_elevation_map(static_cast<int>(rows.size()), static_cast<int>(w), resolution,
                            origin_x, origin_y, std::move(heights), std::move(unknown));
}

}  // namespace tnav
