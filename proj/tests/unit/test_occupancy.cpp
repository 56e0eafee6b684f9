#include <gtest/gtest.h>

#include <set>

#include "helpers.hpp"
#include "lmon/geometry.hpp"
#include "lmon/occupancy.hpp"
#include "lmon/scene_synth.hpp"

namespace lmon {
namespace {

using test::cloud_of;
using test::Rng;

GridSpec grid_of(double cell) {
  GridSpec g;
  g.cell_size = cell;
  return g;
}

TEST(BuildGrid, EmptyCloud) {
  const auto g = build_grid(PointCloud{}, GridSpec{});
  EXPECT_TRUE(g.occupied_cells().empty());
  EXPECT_EQ(g.total_count(), 0u);
  EXPECT_EQ(g.counts.size(), GridSpec{}.cell_count());
}

TEST(BuildGrid, FivePointsInOneCell) {
  const auto spec = grid_of(0.2);
  const Point2 m = spec.cell_center(*spec.cell_of(10.1, 0.1));
  std::vector<Point3> pts;
  for (const auto [dx, dy] : {std::pair{0.0, 0.0}, {0.09, 0.09}, {-0.09, 0.09}, {0.09, -0.09}, {-0.09, -0.09}}) {
    pts.push_back({m.x + dx, m.y + dy, dx + 1.0});
  }
  const auto g = build_grid(cloud_of(pts), spec);
  const auto cells = g.occupied_cells();
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_EQ(g.count(cells[0]), 5u);
  EXPECT_EQ(cells[0], *spec.cell_of(10.1, 0.1));
}

TEST(BuildGrid, MinPointsThreshold) {
  const auto cloud = cloud_of({{5.05, 0.05, 0}, {5.06, 0.06, 0}, {8.05, 0.05, 0}});
  const auto g = build_grid(cloud, grid_of(0.2), 2);
  ASSERT_EQ(g.occupied_cells().size(), 1u);
  EXPECT_EQ(g.occupied_cells()[0], *g.spec.cell_of(5.05, 0.05));
  for (std::size_t i = 0; i < g.counts.size(); ++i) EXPECT_EQ(g.occupied[i] != 0, g.counts[i] >= 2u);
  EXPECT_THROW(build_grid(cloud, grid_of(0.2), 0), ConfigError);
  EXPECT_THROW(build_grid(cloud, grid_of(0.0)), ConfigError);
}

TEST(BuildGrid, CountsOnlyInExtentPoints) {
  Rng rng(1);
  const auto spec = grid_of(0.2);
  for (int n = 0; n < 50; ++n) {
    std::vector<Point3> pts;
    std::size_t inside = 0;
    for (int i = 0; i < 2000; ++i) {
      const Point3 p{rng.uniform(-10, 50), rng.uniform(-20, 20), rng.uniform(-1, 3)};
      inside += p.x >= -spec.backward && p.x < spec.forward && p.y >= -spec.lateral && p.y < spec.lateral;
      pts.push_back(p);
    }
    const auto g = build_grid(cloud_of(pts), spec);
    ASSERT_EQ(g.total_count(), inside);
  }
}

TEST(BuildGrid, RefinementKeepsPointCells) {
  Rng rng(2);
  for (int n = 0; n < 50; ++n) {
    std::vector<Point3> pts;
    for (int i = 0; i < 300; ++i) pts.push_back({rng.uniform(-4, 40), rng.uniform(-12.5, 12.5), 0});
    const auto coarse = build_grid(cloud_of(pts), grid_of(0.5));
    const auto fine = build_grid(cloud_of(pts), grid_of(0.25));
    for (const auto& p : pts) {
      if (const auto c = fine.spec.cell_of(p.x, p.y)) ASSERT_TRUE(fine.is_occupied(*c));
    }
    std::set<CellIndex> parents;
    for (const auto& c : fine.occupied_cells()) parents.insert({c.ix / 2, c.iy / 2});
    const auto occ = coarse.occupied_cells();
    ASSERT_EQ(parents, std::set<CellIndex>(occ.begin(), occ.end()));
  }
}

TEST(BuildGrid, TranslationByOnePitchShiftsCells) {
  Rng rng(3);
  const auto spec = grid_of(0.25);
  for (int n = 0; n < 50; ++n) {
    std::vector<Point3> pts, shifted;
    const int dx = rng.integer(-1, 1), dy = rng.integer(-1, 1);
    for (int i = 0; i < 200; ++i) {
      const int ix = rng.integer(1, spec.cols_x() - 2), iy = rng.integer(1, spec.cols_y() - 2);
      const Point2 m = spec.cell_center({ix, iy});
      const Point3 p{m.x + rng.uniform(-0.1, 0.1), m.y + rng.uniform(-0.1, 0.1), 0.5};
      pts.push_back(p);
      shifted.push_back({p.x + dx * spec.cell_size, p.y + dy * spec.cell_size, p.z});
    }
    const auto a = build_grid(cloud_of(pts), spec);
    const auto b = build_grid(cloud_of(shifted), spec);
    std::set<CellIndex> expected;
    for (const auto& c : a.occupied_cells()) expected.insert({c.ix + dx, c.iy + dy});
    const auto got = b.occupied_cells();
    ASSERT_EQ(std::set<CellIndex>(got.begin(), got.end()), expected);
  }
}

TEST(BuildGrid, CarFaceOccupiesFootprint) {
  Scene scene;
  const auto car = test::box_at(14.0, -2.0, 0.8, 4.5, 1.9, 1.6, 0.5, "car");
  scene.obstacles.push_back(car);
  const auto frame = raycast(scene, LidarConfig{}, 8);
  PointCloud face;
  for (std::size_t i = 0; i < frame.cloud.size(); ++i) {
    if (frame.surfaces[i].kind == SurfaceKind::kObstacle) face.points.push_back(frame.cloud.points[i]);
  }
  ASSERT_GE(face.size(), 3u);
  const auto g = build_grid(face, GridSpec{});
  const auto footprint = box_footprint_cells(car, g.spec);
  std::size_t hit = 0;
  for (const auto& c : footprint) hit += g.is_occupied(c);
  EXPECT_GT(hit, 0u);
  // Range noise (sigma 1 cm) moves a face return at most a few cm off the box.
  auto grown = car;
  grown.size.length += 0.1;
  grown.size.width += 0.1;
  const auto cover = box_footprint_cells(grown, g.spec);
  const std::set<CellIndex> allowed(cover.begin(), cover.end());
  for (const auto& c : g.occupied_cells()) EXPECT_TRUE(allowed.count(c));
}

}  // namespace
}  // namespace lmon
