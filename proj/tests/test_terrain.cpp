#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "test_support.hpp"
#include "tnav/emap_io.hpp"
#include "tnav/error.hpp"
#include "tnav/patch.hpp"
#include "tnav/rng.hpp"
#include "tnav/terrain_gen.hpp"

using namespace tnav;

namespace {
std::string temp_path(const char* name) {
  return (std::filesystem::temp_directory_path() / name).string();
}
}  // namespace

TEST_CASE("inpainting assigns nearest known value with row-major ties") {
  // 3x3, center and one corner unknown.
  std::vector<double> heights = {1.0, 2.0, 3.0, 4.0, 0.0, 6.0, 7.0, 8.0, 0.0};
  std::vector<std::uint8_t> unknown = {0, 0, 0, 0, 1, 0, 0, 0, 1};
  const ElevationMap map = make_elevation_map(3, 3, 0.5, 0.0, 0.0, heights, unknown);
  // Center cell: four known cells at distance 1; row-major smallest is (0,1).
  CHECK(map.at(1, 1) == 2.0);
  // Corner (2,2): neighbors (1,2)=6 and (2,1)=8 at distance 1; (1,2) wins.
  CHECK(map.at(2, 2) == 6.0);
  CHECK(map.unknown[4] == 1);
}

TEST_CASE("non-finite known cells are treated as unknown") {
  std::vector<double> heights = {1.0, std::nan(""), 1.0, 1.0};
  const ElevationMap map = make_elevation_map(2, 2, 0.5, 0.0, 0.0, heights);
  CHECK(map.at(0, 1) == 1.0);
  for (const double h : map.heights) CHECK(std::isfinite(h));
}

TEST_CASE("degenerate map dimensions are rejected") {
  CHECK_THROWS_AS(make_elevation_map(1, 5, 0.5, 0, 0, std::vector<double>(5, 0.0)), SpecError);
  CHECK_THROWS_AS(make_elevation_map(2, 2, 0.0, 0, 0, std::vector<double>(4, 0.0)), SpecError);
}

TEST_CASE("height_at is exact at cell centers") {
  const ElevationMap map = test::map_from_fn(8, 8, 0.25, [](double x, double y) { return x + 2 * y; });
  for (int m = 0; m < 8; ++m) {
    for (int n = 0; n < 8; ++n) {
      CHECK(height_at(map, map.cell_center_x(m), map.cell_center_y(n)) ==
            doctest::Approx(map.at(m, n)).epsilon(1e-14));
    }
  }
}

TEST_CASE("height_at interpolates the midpoint of two cells") {
  // Heights 0.0 and 0.2 in adjacent cells along x; midpoint must be 0.1.
  std::vector<double> heights = {0.0, 0.0, 0.2, 0.2};
  const ElevationMap map = make_elevation_map(2, 2, 0.5, 0.0, 0.0, heights);
  const double x_mid = 0.5;  // between the two cell centers at x=0.25, 0.75
  CHECK(height_at(map, x_mid, 0.25) == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("height_at rejects out-of-extent queries") {
  const ElevationMap map = test::flat_map(4, 4, 0.5);
  CHECK_THROWS_AS(height_at(map, -0.5, 0.5), BoundsError);
  CHECK_THROWS_AS(height_at(map, 0.5, 2.6), BoundsError);
  CHECK_NOTHROW(height_at(map, 0.0, 0.0));
  CHECK_NOTHROW(height_at(map, 2.0, 2.0));
}

TEST_CASE("height_at is continuous across cell boundaries") {
  Rng rng(7);
  const ElevationMap map = test::map_from_fn(16, 16, 0.25, [](double x, double y) {
    return 0.3 * std::sin(3.0 * x) + 0.2 * std::cos(2.0 * y) + 0.1 * x * y;
  });
  for (int trial = 0; trial < 200; ++trial) {
    // Point on an interior cell boundary (x side).
    const int m = 1 + static_cast<int>(draw_uniform(rng, 0, 13));
    const double bx = map.origin_x + (m + 1.0) * map.resolution;  // boundary between centers
    const double y = draw_uniform(rng, 0.3, 3.6);
    const double eps = 1e-12;
    const double lo = height_at(map, bx - eps, y);
    const double hi = height_at(map, bx + eps, y);
    CHECK(std::abs(lo - hi) < 1e-9);
  }
}

TEST_CASE("generate_terrain: flat zero case") {
  TerrainGenSpec spec;
  spec.kind = TerrainKind::Flat;
  spec.base = 0.0;
  const ElevationMap map = generate_terrain(spec, 99, 16, 16, 0.05);
  for (const double h : map.heights) CHECK(h == 0.0);
}

TEST_CASE("generate_terrain: determinism") {
  TerrainGenSpec spec;
  spec.kind = TerrainKind::BoulderField;
  spec.boulder_count = 30;
  const ElevationMap a = generate_terrain(spec, 42, 48, 40, 0.05);
  const ElevationMap b = generate_terrain(spec, 42, 48, 40, 0.05);
  REQUIRE(a.heights.size() == b.heights.size());
  for (std::size_t i = 0; i < a.heights.size(); ++i) CHECK(a.heights[i] == b.heights[i]);
}

TEST_CASE("generate_terrain: boulder heights bounded by exhaustive scan") {
  TerrainGenSpec spec;
  spec.kind = TerrainKind::BoulderField;
  spec.max_height = 0.6;
  spec.base = 0.1;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const ElevationMap map = generate_terrain(spec, seed, 32, 24, 0.05);
    for (const double h : map.heights) {
      CHECK(h >= 0.1);
      CHECK(h <= 0.1 + 0.6 + 1e-12);
    }
  }
}

TEST_CASE("generate_terrain: bounds hold for every kind") {
  for (const TerrainKind kind :
       {TerrainKind::Flat, TerrainKind::Ramp, TerrainKind::Step, TerrainKind::BoulderField}) {
    TerrainGenSpec spec;
    spec.kind = kind;
    spec.max_height = 0.4;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const ElevationMap map = generate_terrain(spec, seed, 20, 20, 0.05);
      for (const double h : map.heights) {
        CHECK(h >= -1e-12);
        CHECK(h <= 0.4 + 1e-12);
      }
    }
  }
}

TEST_CASE("generate_terrain: degenerate ranges rejected") {
  TerrainGenSpec spec;
  spec.kind = TerrainKind::BoulderField;
  spec.radius_lo = 0.4;
  spec.radius_hi = 0.1;
  CHECK_THROWS_AS(generate_terrain(spec, 1, 16, 16, 0.05), SpecError);
  TerrainGenSpec neg;
  neg.max_height = -0.1;
  CHECK_THROWS_AS(generate_terrain(neg, 1, 16, 16, 0.05), SpecError);
}

TEST_CASE("extract_patch at yaw 0 equals the axis-aligned sub-window") {
  Rng rng(3);
  const ElevationMap map = test::map_from_fn(24, 24, 0.25, [&](double x, double y) {
    return 0.2 * std::sin(5 * x) * std::cos(3 * y) + 0.05 * x;
  });
  PatchSpec spec;
  spec.patch_cells = 6;
  spec.angles = {0.0};
  const int c = spec.patch_cells / 2;
  for (int trial = 0; trial < 20; ++trial) {
    const int m = 4 + static_cast<int>(draw_uniform(rng, 0, 15.99));
    const int n = 4 + static_cast<int>(draw_uniform(rng, 0, 15.99));
    const TerrainPatch patch = extract_patch(map, m, n, 0.0, spec);
    for (int a = 0; a < spec.patch_cells; ++a) {
      for (int b = 0; b < spec.patch_cells; ++b) {
        CHECK(patch.at(a, b) ==
              doctest::Approx(map.at(m + a - c, n + b - c)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("extract_patch at yaw pi/2 is the index rotation on a 5x5 toy map") {
  // Heights depend only on x, so the rotated patch must depend only on its
  // second axis, matching a direct index rotation.
  const ElevationMap map = test::map_from_fn(11, 11, 0.5, [](double x, double) { return x; });
  PatchSpec spec;
  spec.patch_cells = 5;
  spec.angles = {0.0};
  const int c = 2;
  const TerrainPatch rot = extract_patch(map, 5, 5, kPi / 2.0, spec);
  const TerrainPatch straight = extract_patch(map, 5, 5, 0.0, spec);
  for (int a = 0; a < 5; ++a) {
    for (int b = 0; b < 5; ++b) {
      // rotate(a-c, b-c) by 90 deg -> (-(b-c), a-c)
      CHECK(rot.at(a, b) == doctest::Approx(straight.at(c - (b - c), c + (a - c))).epsilon(1e-13));
    }
  }
  // Constancy swaps axes: straight rows are constant, rotated columns are.
  for (int a = 0; a < 5; ++a) {
    for (int b = 1; b < 5; ++b) {
      CHECK(straight.at(a, b) == doctest::Approx(straight.at(a, 0)).epsilon(1e-13));
      CHECK(rot.at(b, a) == doctest::Approx(rot.at(0, a)).epsilon(1e-13));
    }
  }
}

TEST_CASE("extract_patch near the border raises a bounds error") {
  const ElevationMap map = test::flat_map(16, 16, 0.25);
  PatchSpec spec;
  spec.patch_cells = 8;
  CHECK_THROWS_AS(extract_patch(map, 0, 8, 0.0, spec), BoundsError);
  CHECK_THROWS_AS(extract_patch(map, 8, 15, 0.3, spec), BoundsError);
}

TEST_CASE("patch extraction shifts by exactly the height offset") {
  const ElevationMap base = test::map_from_fn(20, 20, 0.25, [](double x, double y) {
    return 0.1 * std::sin(4 * x) + 0.2 * std::cos(2 * y);
  });
  const ElevationMap shifted = test::map_from_fn(20, 20, 0.25, [](double x, double y) {
    return 0.1 * std::sin(4 * x) + 0.2 * std::cos(2 * y) + 1.5;
  });
  PatchSpec spec;
  spec.patch_cells = 6;
  const TerrainPatch a = extract_patch(base, 10, 10, 0.7, spec);
  const TerrainPatch b = extract_patch(shifted, 10, 10, 0.7, spec);
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    CHECK(b.cells[i] - a.cells[i] == doctest::Approx(1.5).epsilon(1e-12));
  }
}

TEST_CASE("patch margin grows with the footprint") {
  PatchSpec small;
  small.patch_cells = 8;
  PatchSpec large;
  large.patch_cells = 16;
  CHECK(patch_margin_cells(large) > patch_margin_cells(small));
}

TEST_CASE("EMAP round-trip is bit identical") {
  TerrainGenSpec spec;
  spec.kind = TerrainKind::BoulderField;
  const ElevationMap generated = generate_terrain(spec, 17, 24, 20, 0.025, -0.3, 0.7);
  std::vector<std::uint8_t> mask(generated.heights.size(), 0);
  mask[5] = 1;  // exercise the mask payload
  const ElevationMap map = make_elevation_map(24, 20, 0.025, -0.3, 0.7, generated.heights, mask);
  const std::string path = temp_path("tnav_roundtrip.emap");
  write_emap(map, path);
  const ElevationMap back = read_emap(path);
  CHECK(back.height_cells == map.height_cells);
  CHECK(back.width_cells == map.width_cells);
  CHECK(back.resolution == map.resolution);
  CHECK(back.origin_x == map.origin_x);
  CHECK(back.origin_y == map.origin_y);
  for (std::size_t i = 0; i < map.heights.size(); ++i) {
    CHECK(back.heights[i] == map.heights[i]);
    CHECK(back.unknown[i] == map.unknown[i]);
  }
  std::remove(path.c_str());
}

TEST_CASE("EMAP reader rejects bad magic and short payloads") {
  const std::string bad_magic = temp_path("tnav_bad_magic.emap");
  {
    std::ofstream out(bad_magic, std::ios::binary);
    out << "NOPE" << std::string(64, '\0');
  }
  CHECK_THROWS_WITH_AS(read_emap(bad_magic), doctest::Contains("bad magic"), FormatError);
  std::remove(bad_magic.c_str());

  const ElevationMap map = test::flat_map(4, 4, 0.5);
  const std::string truncated = temp_path("tnav_truncated.emap");
  write_emap(map, truncated);
  std::filesystem::resize_file(truncated, 40);
  CHECK_THROWS_WITH_AS(read_emap(truncated), doctest::Contains("short payload"), FormatError);
  std::remove(truncated.c_str());
}

TEST_CASE("CSV import marks nan cells unknown and inpaints them") {
  const std::string path = temp_path("tnav_fixture.csv");
  {
    std::ofstream out(path);
    out << "0.0,0.1\n0.2,nan\n";
  }
  const ElevationMap map = read_emap_csv(path, 0.5);
  CHECK(map.height_cells == 2);
  CHECK(map.width_cells == 2);
  CHECK(map.unknown[3] == 1);
  CHECK(map.at(1, 1) == 0.1);  // nearest known, row-major tie-break
  std::remove(path.c_str());
}
