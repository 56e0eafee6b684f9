#include "lmon/types.hpp"

#include <algorithm>
#include <string>

#include "lmon/geometry.hpp"

namespace lmon {

void BBox3D::validate() {
  if (!center.finite() || !std::isfinite(yaw)) {
    throw ConfigError("box '" + object_id + "': non-finite center or yaw");
  }
  if (!(size.length > 0.0) || !(size.width > 0.0) || !(size.height > 0.0)) {
    throw ConfigError("box '" + object_id + "': size components must be > 0");
  }
  yaw = normalize_angle(yaw);
}

ObjectList ObjectList::with_threshold(std::vector<Detection> detections, double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw ConfigError("tau_conf must be in [0,1]");
  ObjectList out;
  out.tau_conf = tau;
  for (auto& d : detections) {
    if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) {
      throw InputError("detection '" + d.box.object_id + "': confidence outside [0,1]");
    }
    if (d.confidence >= tau) out.detections.push_back(std::move(d));
  }
  return out;
}

std::vector<BBox3D> ObjectList::boxes() const {
  std::vector<BBox3D> out;
  out.reserve(detections.size());
  for (const auto& d : detections) out.push_back(d.box);
  return out;
}

void SafetyZone::validate() const {
  if (!(forward_extent > 0.0) || !(lateral_extent > 0.0)) {
    throw ConfigError("safety zone extents must be > 0");
  }
  for (const auto& poly : road_mask) {
    if (poly.size() < 3) throw ConfigError("road mask polygon needs at least 3 vertices");
    if (!polygon_is_simple(poly)) throw ConfigError("road mask polygon is self-intersecting");
  }
}

void CameraCalibration::validate() const {
  if (!(fx > 0.0) || !(fy > 0.0)) throw ConfigError("camera focal lengths must be > 0");
  if (width <= 0 || height <= 0) throw ConfigError("camera image size must be positive");
  // R * R^T == I
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double dot = 0.0;
      for (int k = 0; k < 3; ++k) dot += rotation[i][k] * rotation[j][k];
      const double expected = i == j ? 1.0 : 0.0;
      if (std::abs(dot - expected) > 1e-6) throw ConfigError("camera extrinsic rotation is not orthonormal");
    }
  }
}

Point3 CameraCalibration::to_camera(const Point3& p) const {
  const auto& r = rotation;
  return {r[0][0] * p.x + r[0][1] * p.y + r[0][2] * p.z + translation.x,
          r[1][0] * p.x + r[1][1] * p.y + r[1][2] * p.z + translation.y,
          r[2][0] * p.x + r[2][1] * p.y + r[2][2] * p.z + translation.z};
}

}  // namespace lmon
