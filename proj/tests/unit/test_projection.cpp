#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>

#include "helpers.hpp"
#include "lmon/projection.hpp"
#include "lmon/scene_synth.hpp"

namespace lmon {
namespace {

using test::cloud_of;
using test::Rng;

constexpr double kPi = std::numbers::pi;

TEST(Angles, Examples) {
  auto a = angles({10, 0, 0});
  ASSERT_TRUE(a);
  EXPECT_DOUBLE_EQ(a->azimuth, 0.0);
  EXPECT_DOUBLE_EQ(a->vertical, 0.0);
  a = angles({0, 5, 5});
  EXPECT_NEAR(a->azimuth, kPi / 2, 1e-12);
  EXPECT_NEAR(a->vertical, kPi / 4, 1e-12);
  a = angles({1, 1, std::sqrt(2.0)});
  EXPECT_NEAR(a->azimuth, kPi / 4, 1e-12);
  EXPECT_NEAR(a->vertical, kPi / 4, 1e-12);
}

TEST(Angles, DegenerateAndBackwardPoints) {
  EXPECT_FALSE(angles({0, 0, 3}));
  EXPECT_FALSE(angles({0, 0, 0}));
  EXPECT_DOUBLE_EQ(angles({-1, 0, 0})->azimuth, kPi);
  EXPECT_DOUBLE_EQ(angles({-1, -0.0, 0})->azimuth, kPi);
}

ProjectionSpec small_spec() {
  ProjectionSpec s;
  s.num_rows = 8;
  s.num_cols = 16;
  return s;
}

TEST(Project, CollisionKeepsNearerPoint) {
  const auto spec = small_spec();
  const auto img = project(cloud_of({{12, 0, 0}, {10, 0, 0}}), spec);
  EXPECT_EQ(img.filled(), 1u);
  EXPECT_EQ(img.stats.collisions, 1u);
  const int r = *spec.row_of(0.0), c = *spec.col_of(0.0);
  EXPECT_DOUBLE_EQ(img.depth(r, c), 10.0);
  EXPECT_EQ(img.source(r, c), 1u);
}

TEST(Project, EqualDepthKeepsLowerIndex) {
  const auto img = project(cloud_of({{10, 0, 0}, {10, 0, 0}, {10, 0, 0}}), small_spec());
  EXPECT_EQ(img.filled(), 1u);
  EXPECT_EQ(img.stats.collisions, 2u);
  for (auto s : img.source.data()) if (s != kNoPoint) EXPECT_EQ(s, 0u);
}

TEST(Project, SinglePointFillsOnePixel) {
  const Point3 origin{0, 0, 1.8};
  const Point3 p{7, -3, 0.4};
  const auto img = project(cloud_of({p}, origin), ProjectionSpec{});
  EXPECT_EQ(img.filled(), 1u);
  for (int r = 0; r < img.rows(); ++r) {
    for (int c = 0; c < img.cols(); ++c) {
      if (img.empty(r, c)) {
        EXPECT_EQ(img.depth(r, c), 0.0);
        continue;
      }
      EXPECT_NEAR(img.depth(r, c), (p - origin).norm(), 1e-12);
      EXPECT_DOUBLE_EQ(img.height(r, c), p.z);
    }
  }
}

TEST(Project, BoundaryGoesToHigherBin) {
  const auto spec = small_spec();
  const double edge = spec.vertical_min + 3.0 * (spec.vertical_max - spec.vertical_min) / spec.num_rows;
  EXPECT_EQ(*spec.row_of(edge), 3);
  EXPECT_EQ(*spec.row_of(spec.vertical_max), spec.num_rows - 1);
  EXPECT_EQ(*spec.col_of(kPi), spec.num_cols - 1);
  EXPECT_EQ(*spec.col_of(0.0), spec.num_cols / 2);
  EXPECT_FALSE(spec.row_of(spec.vertical_max + 1e-9));
}

TEST(Project, RowZeroIsLowestElevation) {
  const auto spec = small_spec();
  const auto img = project(cloud_of({{10, 0, -4}, {10, 0, 2.5}}), spec);
  EXPECT_FALSE(img.empty(0, *spec.col_of(0.0)));
  EXPECT_FALSE(img.empty(spec.num_rows - 1, *spec.col_of(0.0)));
}

TEST(Project, CountsOutOfFovAndDegenerate) {
  const auto img = project(cloud_of({{1, 0, 5}, {0, 0, 1}, {5, 0, 0}, {2, 0, -3}}), small_spec());
  EXPECT_EQ(img.stats.input_points, 4u);
  EXPECT_EQ(img.stats.out_of_fov, 2u);
  EXPECT_EQ(img.stats.degenerate, 1u);
  EXPECT_EQ(img.stats.projected, 1u);
  EXPECT_EQ(img.filled(), 1u);
}

TEST(Project, RaycastScanHasNoCollisions) {
  Scene scene;
  scene.obstacles.push_back(test::box_at(12, 2, 0.8, 4.5, 1.9, 1.6, 0.2, "car"));
  const LidarConfig cfg;
  const auto frame = raycast(scene, cfg, 5);
  const auto img = project(frame.cloud, cfg.projection());
  EXPECT_EQ(img.rows(), 64);
  EXPECT_EQ(img.cols(), 1024);
  EXPECT_EQ(img.stats.collisions, 0u);
  EXPECT_EQ(img.stats.out_of_fov, 0u);
  EXPECT_EQ(img.filled(), frame.cloud.size());
}

TEST(Project, StateInvariantsAndMinDepthOnRandomClouds) {
  Rng rng(99);
  const auto spec = small_spec();
  for (int n = 0; n < 1000; ++n) {
    std::vector<Point3> pts;
    const int count = rng.integer(1, 200);
    for (int i = 0; i < count; ++i) {
      if (!pts.empty() && rng.coin(0.1)) {
        pts.push_back(pts[rng.integer(0, static_cast<int>(pts.size()) - 1)]);
      } else {
        pts.push_back({rng.uniform(-20, 20), rng.uniform(-20, 20), rng.uniform(-8, 8)});
      }
    }
    const Point3 origin{0, 0, rng.uniform(0.0, 2.0)};
    const auto cloud = cloud_of(pts, origin);
    const auto img = project(cloud, spec);

    std::map<std::pair<int, int>, double> min_range;
    std::size_t in_fov = 0;
    for (const auto& p : pts) {
      const Point3 d = p - origin;
      const double el = std::atan2(d.z, std::hypot(d.x, d.y));
      double az = std::atan2(d.y, d.x);
      if (az == -kPi) az = kPi;
      if (el < spec.vertical_min || el > spec.vertical_max) continue;
      const int r = std::min(spec.num_rows - 1, static_cast<int>(std::floor((el - spec.vertical_min) / (spec.vertical_max - spec.vertical_min) * spec.num_rows)));
      const int c = std::min(spec.num_cols - 1, static_cast<int>(std::floor((az + kPi) / (2 * kPi) * spec.num_cols)));
      ++in_fov;
      auto [it, fresh] = min_range.emplace(std::pair{r, c}, d.norm());
      if (!fresh) it->second = std::min(it->second, d.norm());
    }
    ASSERT_EQ(img.filled(), min_range.size());
    ASSERT_EQ(img.stats.projected + img.stats.collisions, in_fov);
    for (int r = 0; r < spec.num_rows; ++r) {
      for (int c = 0; c < spec.num_cols; ++c) {
        const auto it = min_range.find({r, c});
        ASSERT_EQ(img.empty(r, c), it == min_range.end());
        if (it == min_range.end()) continue;
        ASSERT_EQ(img.depth(r, c), it->second);
        const auto& src = pts[img.source(r, c)];
        ASSERT_EQ(img.height(r, c), src.z);
      }
    }
  }
}

TEST(Project, LosslessWithoutCollisions) {
  Rng rng(4);
  ProjectionSpec spec;
  for (int n = 0; n < 50; ++n) {
    std::vector<Point3> pts;
    std::map<std::pair<int, int>, bool> used;
    const Point3 origin{0, 0, 1.8};
    while (pts.size() < 300) {
      const int r = rng.integer(0, spec.num_rows - 1), c = rng.integer(0, spec.num_cols - 1);
      if (!used.emplace(std::pair{r, c}, true).second) continue;
      const double el = spec.row_center(r), az = spec.col_center(c), range = rng.uniform(1.0, 80.0);
      pts.push_back(origin + Point3{range * std::cos(el) * std::cos(az), range * std::cos(el) * std::sin(az), range * std::sin(el)});
    }
    const auto img = project(cloud_of(pts, origin), spec);
    ASSERT_EQ(img.filled(), pts.size());
    for (int r = 0; r < spec.num_rows; ++r) {
      for (int c = 0; c < spec.num_cols; ++c) {
        if (img.empty(r, c)) continue;
        const auto& p = pts[img.source(r, c)];
        ASSERT_NEAR(img.depth(r, c), (p - origin).norm(), 1e-6);
        ASSERT_NEAR(img.height(r, c), p.z, 1e-6);
      }
    }
  }
}

TEST(Project, Deterministic) {
  Scene scene;
  scene.ground_slope = 0.03;
  scene.obstacles.push_back(test::box_at(9, -1, 1.3, 0.6, 0.6, 1.8, 0, "ped"));
  const LidarConfig cfg;
  const auto frame = raycast(scene, cfg, 17);
  const auto a = project(frame.cloud, cfg.projection());
  const auto b = project(frame.cloud, cfg.projection());
  EXPECT_TRUE(a.height == b.height);
  EXPECT_TRUE(a.depth == b.depth);
  EXPECT_TRUE(a.source == b.source);
}

TEST(ProjectionSpec, LayerTableBinsByMidpoints) {
  ProjectionSpec s;
  s.num_rows = 3;
  s.num_cols = 4;
  s.vertical_min = -0.5;
  s.vertical_max = 0.5;
  s.layer_angles = {-0.3, 0.0, 0.1};
  EXPECT_NO_THROW(s.validate());
  EXPECT_EQ(*s.row_of(-0.2), 0);
  EXPECT_EQ(*s.row_of(-0.15), 1);
  EXPECT_EQ(*s.row_of(0.05), 2);
  EXPECT_EQ(*s.row_of(0.049), 1);
  EXPECT_DOUBLE_EQ(s.row_center(2), 0.1);
  s.layer_angles = {0.0, -0.3, 0.1};
  EXPECT_THROW(s.validate(), ConfigError);
  s.layer_angles = {0.0, 0.1};
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(ProjectionSpec, RejectsDegenerateLayouts) {
  ProjectionSpec s;
  s.num_rows = 1;
  EXPECT_THROW(s.validate(), ConfigError);
  s = ProjectionSpec{};
  s.vertical_min = s.vertical_max;
  EXPECT_THROW(s.validate(), ConfigError);
  s = ProjectionSpec{};
  s.azimuth_max = s.azimuth_min - 1;
  EXPECT_THROW(project(cloud_of({{1, 0, 0}}), s), ConfigError);
}

}  // namespace
}  // namespace lmon
