#include "tnav/terrain_gen.hpp"

#include <algorithm>
#include <cmath>

#include "tnav/error.hpp"
#include "tnav/geometry.hpp"
#include "tnav/rng.hpp"

namespace tnav {

TerrainKind terrain_kind_from_string(const std::string& s) {
  if (s == "flat") return TerrainKind::Flat;
  if (s == "ramp") return TerrainKind::Ramp;
  if (s == "step") return TerrainKind::Step;
  if (s == "boulder_field") return TerrainKind::BoulderField;
  throw SpecError("unknown terrain kind: '" + s + "'");
}

std::string to_string(TerrainKind k) {
  switch (k) {
    case TerrainKind::Flat: return "flat";
    case TerrainKind::Ramp: return "ramp";
    case TerrainKind::Step: return "step";
    case TerrainKind::BoulderField: return "boulder_field";
  }
  return "?";
}

void TerrainGenSpec::validate() const {
  if (max_height < 0.0) throw SpecError("terrain max_height must be >= 0");
  if (radius_lo > radius_hi) throw SpecError("terrain radius range is degenerate (lo > hi)");
  if (radius_lo <= 0.0) throw SpecError("terrain radius_lo must be > 0");
  if (boulder_count < 0) throw SpecError("terrain boulder_count must be >= 0");
  if (ramp_angle < 0.0 || ramp_angle >= kPi / 2.0) {
    throw SpecError("terrain ramp_angle must be in [0, pi/2)");
  }
}

namespace {

struct Boulder {
  double cx, cy, radius, height;
};

}  // namespace

ElevationMap generate_terrain(const TerrainGenSpec& spec, std::uint64_t seed, int height_cells,
                              int width_cells, double resolution, double origin_x,
                              double origin_y) {
  spec.validate();
  if (height_cells < 2 || width_cells < 2 || !(resolution > 0.0)) {
    throw SpecError("generate_terrain: invalid dims");
  }

  const std::size_t cells = static_cast<std::size_t>(height_cells) * width_cells;
  std::vector<double> heights(cells, spec.base);
  const double ext_x = height_cells * resolution;
  const double ext_y = width_cells * resolution;

  switch (spec.kind) {
    case TerrainKind::Flat:
      break;
    case TerrainKind::Ramp: {
      // Inclined along +x from the first quarter of the map, capped at
      // max_height so the bound contract holds.
      const double slope = std::tan(spec.ramp_angle);
      const double x0 = 0.25 * ext_x;
      for (int m = 0; m < height_cells; ++m) {
        const double x = (m + 0.5) * resolution;
        const double rise = std::clamp(slope * (x - x0), 0.0, spec.max_height);
        for (int n = 0; n < width_cells; ++n) {
          heights[static_cast<std::size_t>(m) * width_cells + n] = spec.base + rise;
        }
      }
      break;
    }
    case TerrainKind::Step: {
      for (int m = height_cells / 2; m < height_cells; ++m) {
        for (int n = 0; n < width_cells; ++n) {
          heights[static_cast<std::size_t>(m) * width_cells + n] = spec.base + spec.max_height;
        }
      }
      break;
    }
    case TerrainKind::BoulderField: {
      Rng rng(seed);
      std::vector<Boulder> boulders;
      boulders.reserve(spec.boulder_count);
      for (int i = 0; i < spec.boulder_count; ++i) {
        Boulder b;
        b.cx = draw_uniform(rng, 0.0, ext_x);
        b.cy = draw_uniform(rng, 0.0, ext_y);
        b.radius = draw_uniform(rng, spec.radius_lo, spec.radius_hi);
        b.height = spec.max_height * draw_uniform(rng, 0.3, 1.0);
        boulders.push_back(b);
      }
      for (int m = 0; m < height_cells; ++m) {
        const double x = (m + 0.5) * resolution;
        for (int n = 0; n < width_cells; ++n) {
          const double y = (n + 0.5) * resolution;
          double bump = 0.0;
          for (const auto& b : boulders) {
            const double r = hypot2(x - b.cx, y - b.cy);
            if (r >= b.radius) continue;
            const double cap = 0.5 * b.height * (1.0 + std::cos(kPi * r / b.radius));
            bump = std::max(bump, cap);
          }
          heights[static_cast<std::size_t>(m) * width_cells + n] = spec.base + bump;
        }
      }
      break;
    }
  }

  return make_elevation_map(height_cells, width_cells, resolution, origin_x, origin_y,
                            std::move(heights));
}

}  // namespace tnav
