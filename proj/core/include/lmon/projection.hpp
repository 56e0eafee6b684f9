#pragma once

#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "lmon/image.hpp"
#include "lmon/types.hpp"

namespace lmon {

struct ProjectionSpec {
  int num_rows = 64;
  int num_cols = 1024;
  double vertical_min = -25.0 * std::numbers::pi / 180.0;
  double vertical_max = 15.0 * std::numbers::pi / 180.0;
  double azimuth_min = -std::numbers::pi;
  double azimuth_max = std::numbers::pi;
  /// Optional per-layer elevation table (ascending, one entry per row) for
  /// sensors with non-uniform beam spacing. Empty means uniform bins.
  std::vector<double> layer_angles;

  void validate() const;

  /// Row bin for an elevation angle, nullopt outside the vertical FOV.
  [[nodiscard]] std::optional<int> row_of(double vertical) const;
  /// Column bin for an azimuth angle, nullopt outside the azimuth range.
  [[nodiscard]] std::optional<int> col_of(double azimuth) const;
  /// Center angle of a row / column bin.
  [[nodiscard]] double row_center(int row) const;
  [[nodiscard]] double col_center(int col) const;
};

struct BeamAngles {
  double azimuth = 0.0;   // (-pi, pi]
  double vertical = 0.0;  // [-pi/2, pi/2]
};

/// Azimuth and elevation of a sensor-frame point. nullopt when the point
/// lies on the sensor's vertical axis (x = y = 0).
std::optional<BeamAngles> angles(const Point3& sensor_frame_point);

inline constexpr std::uint32_t kNoPoint = std::numeric_limits<std::uint32_t>::max();

struct ProjectionStats {
  std::size_t input_points = 0;
  std::size_t projected = 0;  // points that own a pixel
  std::size_t collisions = 0;
  std::size_t out_of_fov = 0;
  std::size_t degenerate = 0;
};

/// Height/depth images with one LiDAR return per pixel. Row 0 is the
/// lowest elevation. A pixel is EMPTY exactly when `source` holds kNoPoint;
/// the float channels are then zero and carry no meaning.
struct RangeImages {
  Image<double> height;  // vehicle-frame z [m]
  Image<double> depth;   // range from the sensor [m]
  Image<double> planar;  // horizontal distance from the sensor [m]
  Image<std::uint32_t> source;
  ProjectionStats stats;

  [[nodiscard]] int rows() const { return source.rows(); }
  [[nodiscard]] int cols() const { return source.cols(); }
  [[nodiscard]] bool empty(int r, int c) const { return source(r, c) == kNoPoint; }
  [[nodiscard]] std::size_t filled() const;
};

/// Bins every point into a pixel; on collision the nearer point is kept
/// (equal depth: lower point index).
RangeImages project(const PointCloud& cloud, const ProjectionSpec& spec);

}  // namespace lmon
