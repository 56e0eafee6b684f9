#include "lmon/projection.hpp"

#include <algorithm>
#include <cmath>

namespace lmon {
namespace {

std::optional<int> uniform_bin(double v, double lo, double hi, int n) {
  if (!(v >= lo && v <= hi)) return std::nullopt;
  const int bin = static_cast<int>(std::floor((v - lo) / (hi - lo) * n));
  return std::clamp(bin, 0, n - 1);
}

}  // namespace

void ProjectionSpec::validate() const {
  if (num_rows < 2 || num_cols < 2) throw ConfigError("projection needs at least 2 rows and 2 columns");
  if (!(vertical_min < vertical_max)) throw ConfigError("projection vertical FOV must satisfy min < max");
  if (!(azimuth_min < azimuth_max)) throw ConfigError("projection azimuth range must satisfy min < max");
  if (!layer_angles.empty()) {
    if (layer_angles.size() != static_cast<std::size_t>(num_rows)) {
      throw ConfigError("projection layer table must have one angle per row");
    }
    if (!std::is_sorted(layer_angles.begin(), layer_angles.end(), std::less_equal<>{}) ||
        std::adjacent_find(layer_angles.begin(), layer_angles.end()) != layer_angles.end()) {
      throw ConfigError("projection layer table must be strictly ascending");
    }
  }
}

std::optional<int> ProjectionSpec::row_of(double vertical) const {
  if (layer_angles.empty()) return uniform_bin(vertical, vertical_min, vertical_max, num_rows);
  if (!(vertical >= vertical_min && vertical <= vertical_max)) return std::nullopt;
  // Bin edges sit halfway between neighbouring layers; an angle on an edge
  // goes to the upper layer.
  int row = 0;
  for (int r = 1; r < num_rows; ++r) {
    const double edge = 0.5 * (layer_angles[r - 1] + layer_angles[r]);
    if (vertical >= edge) row = r;
  }
  return row;
}

std::optional<int> ProjectionSpec::col_of(double azimuth) const {
  return uniform_bin(azimuth, azimuth_min, azimuth_max, num_cols);
}

double ProjectionSpec::row_center(int row) const {
  if (!layer_angles.empty()) return layer_angles[row];
  return vertical_min + (row + 0.5) * (vertical_max - vertical_min) / num_rows;
}

double ProjectionSpec::col_center(int col) const {
  return azimuth_min + (col + 0.5) * (azimuth_max - azimuth_min) / num_cols;
}

std::optional<BeamAngles> angles(const Point3& p) {
  const double planar = std::hypot(p.x, p.y);
  if (planar == 0.0) return std::nullopt;
  double azimuth = std::atan2(p.y, p.x);
  if (azimuth == -std::numbers::pi) azimuth = std::numbers::pi;
  return BeamAngles{azimuth, std::atan2(p.z, planar)};
}

std::size_t RangeImages::filled() const {
  const auto d = source.data();
  return static_cast<std::size_t>(std::count_if(d.begin(), d.end(), [](std::uint32_t s) { return s != kNoPoint; }));
}

RangeImages project(const PointCloud& cloud, const ProjectionSpec& spec) {
  spec.validate();
  if (cloud.points.size() >= kNoPoint) throw InputError("point cloud too large to index");

  RangeImages out;
  out.height = Image<double>(spec.num_rows, spec.num_cols, 0.0);
  out.depth = Image<double>(spec.num_rows, spec.num_cols, 0.0);
  out.planar = Image<double>(spec.num_rows, spec.num_cols, 0.0);
  out.source = Image<std::uint32_t>(spec.num_rows, spec.num_cols, kNoPoint);
  out.stats.input_points = cloud.points.size();

  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const Point3& p = cloud.points[i];
    const Point3 rel = p - cloud.sensor_origin;
    const auto a = angles(rel);
    if (!a) {
      ++out.stats.degenerate;
      continue;
    }
    const auto row = spec.row_of(a->vertical);
    const auto col = spec.col_of(a->azimuth);
    if (!row || !col) {
      ++out.stats.out_of_fov;
      continue;
    }
    const double range = rel.norm();
    auto& src = out.source(*row, *col);
    if (src != kNoPoint) {
      ++out.stats.collisions;
      // Strict comparison: on equal depth the earlier (lower) index stays.
      if (!(range < out.depth(*row, *col))) continue;
    }
    src = static_cast<std::uint32_t>(i);
    out.depth(*row, *col) = range;
    out.planar(*row, *col) = rel.planar_norm();
    out.height(*row, *col) = p.z;
  }
  out.stats.projected = out.stats.input_points - out.stats.out_of_fov - out.stats.degenerate - out.stats.collisions;
  return out;
}

}  // namespace lmon
