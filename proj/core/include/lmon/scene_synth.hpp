#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lmon/obstacle_filter.hpp"
#include "lmon/projection.hpp"
#include "lmon/types.hpp"

namespace lmon {

/// Ground-level spray: each beam crossing the sphere returns from inside it
/// with a fixed persistence chosen so that about `point_count` beams do.
struct SprayCluster {
  Point3 center;
  double radius = 0.8;
  int point_count = 60;
};

/// Box-and-plane world. Ground is the plane z = x * tan(ground_slope).
struct Scene {
  double ground_slope = 0.0;
  std::vector<BBox3D> bumps;      // traversable raised ground (curbs, ramps)
  std::vector<BBox3D> obstacles;  // annotated objects
  std::vector<BBox3D> overhangs;  // unannotated boxes above the ground
  std::optional<SprayCluster> spray;

  void validate() const;
  [[nodiscard]] double ground_height(double x) const;
};

struct LidarConfig {
  int num_layers = 64;
  int horizontal_resolution = 1024;
  double vertical_min = deg_to_rad(-25.0);
  double vertical_max = deg_to_rad(15.0);
  double max_range = 120.0;
  double range_noise_sigma = 0.01;
  double mount_height = 1.8;

  void validate() const;
  /// Projection whose bins are centred on the beams (one return per pixel).
  [[nodiscard]] ProjectionSpec projection() const;
  [[nodiscard]] Point3 origin() const { return {0.0, 0.0, mount_height}; }
};

enum class SurfaceKind : std::uint8_t { kGround, kBump, kObstacle, kOverhang, kSpray };

struct SurfaceHit {
  SurfaceKind kind = SurfaceKind::kGround;
  int index = -1;  // into the matching Scene vector, -1 for ground/spray
};

struct SynthFrame {
  PointCloud cloud;                  // vehicle frame
  std::vector<SurfaceHit> surfaces;  // one per point
  ObjectList annotations;            // scene obstacles, confidence 1
  std::vector<std::size_t> visibility;  // returns per annotation
};

/// Casts one ray per (layer, azimuth) beam; the nearest hit within
/// max_range yields a return with Gaussian range noise. Deterministic in
/// `seed`.
SynthFrame raycast(const Scene& scene, const LidarConfig& cfg, std::uint64_t seed);

enum class Expectation { kDetectable, kTraversable, kExpectedFp };

std::string to_string(Expectation e);

struct ScenarioCase {
  std::string name;
  Scene scene;
  Expectation expectation = Expectation::kDetectable;
};

/// Fixed suite: flat road, 4 degree slope, curb, cars, pedestrians,
/// overhang above and below clearance, occluded pair and spray. `seed`
/// jitters object placement.
std::vector<ScenarioCase> scenario_suite(std::uint64_t seed);

struct SuiteFrame {
  ScenarioCase scenario;
  LidarConfig lidar;
  std::uint64_t seed = 0;
  SynthFrame frame;
};

/// `count` frames cycling through the suite; the range noise cycles over
/// 0.01, 0.02, 0 and 0.015 m.
std::vector<SuiteFrame> generate_suite_frames(std::size_t count, std::uint64_t base_seed,
                                              const LidarConfig& base = {});

struct FaultInjection {
  double drop_rate = 0.3;      // probability of deleting each true object
  double spurious_rate = 0.1;  // spurious boxes per true object
  double clearance = 1.0;      // [m] min gap between spurious and true boxes
  std::size_t min_returns = 3; // objects with fewer returns are never reported
};

/// Simulated primary detector output: ground-truth boxes of visible objects
/// with random deletions and spurious boxes placed in the zone.
ObjectList inject_faults(const SynthFrame& frame, const SafetyZone& zone, const FaultInjection& faults,
                         std::uint64_t seed);

}  // namespace lmon
