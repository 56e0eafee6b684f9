#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lmon {

/// Base for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration (CLI exit code 1).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Missing, unreadable or corrupt input files (CLI exit code 2).
class IoError : public Error {
 public:
  using Error::Error;
};

/// Data that violates a per-frame contract, e.g. a score outside [0,1].
class InputError : public Error {
 public:
  using Error::Error;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend Point3 operator+(const Point3& a, const Point3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Point3 operator-(const Point3& a, const Point3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  friend Point3 operator*(double s, const Point3& p) { return {s * p.x, s * p.y, s * p.z}; }
  friend bool operator==(const Point3&, const Point3&) = default;

  [[nodiscard]] bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
  [[nodiscard]] double norm() const { return std::sqrt(x * x + y * y + z * z); }
  [[nodiscard]] double planar_norm() const { return std::hypot(x, y); }
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

/// A single LiDAR sweep. Points are expressed in the vehicle frame
/// (x forward, y left, z up, origin on the ground below the rear axle);
/// `sensor_origin` is the LiDAR position in that frame.
struct PointCloud {
  std::vector<Point3> points;
  std::string frame_id;
  Point3 sensor_origin;
  double timestamp = 0.0;

  [[nodiscard]] std::size_t size() const { return points.size(); }
  [[nodiscard]] bool empty() const { return points.empty(); }
};

/// Wraps an angle into (-pi, pi].
inline double normalize_angle(double a) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  a = std::fmod(a, kTwoPi);
  if (a <= -std::numbers::pi) a += kTwoPi;
  if (a > std::numbers::pi) a -= kTwoPi;
  return a;
}

struct BoxSize {
  double length = 1.0;  // along the box heading
  double width = 1.0;
  double height = 1.0;
  friend bool operator==(const BoxSize&, const BoxSize&) = default;
};

/// Oriented 3D box in the vehicle frame. `center.z` is the geometric center.
struct BBox3D {
  Point3 center;
  BoxSize size;
  double yaw = 0.0;
  std::string class_label = "unknown";
  std::string object_id;

  /// Throws ConfigError if a dimension is not strictly positive or a
  /// coordinate is not finite. Normalizes yaw.
  void validate();

  [[nodiscard]] double z_min() const { return center.z - 0.5 * size.height; }
  [[nodiscard]] double z_max() const { return center.z + 0.5 * size.height; }
};

struct Detection {
  BBox3D box;
  double confidence = 1.0;
};

struct ObjectList {
  std::vector<Detection> detections;
  double tau_conf = 0.0;

  /// Keeps the detections whose confidence reaches `tau`.
  static ObjectList with_threshold(std::vector<Detection> detections, double tau);

  [[nodiscard]] std::vector<BBox3D> boxes() const;
  [[nodiscard]] std::size_t size() const { return detections.size(); }
};

using Polygon = std::vector<Point2>;

/// Region in which objects can threaten the ego vehicle.
struct SafetyZone {
  double forward_extent = 36.0;
  double lateral_extent = 8.5;
  std::vector<Polygon> road_mask;  // empty: no road restriction

  /// Throws ConfigError on non-positive extents or self-intersecting polygons.
  void validate() const;
};

using Matrix3 = std::array<std::array<double, 3>, 3>;

/// Pinhole camera. The camera frame follows the optical convention:
/// z along the optical axis, x to the image right, y to the image bottom.
struct CameraCalibration {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  Matrix3 rotation{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};  // vehicle -> camera
  Point3 translation;                                 // vehicle -> camera
  int width = 0;
  int height = 0;

  void validate() const;

  [[nodiscard]] Point3 to_camera(const Point3& p) const;
};

}  // namespace lmon
