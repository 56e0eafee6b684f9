#include "lmon/scene_synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "lmon/geometry.hpp"

namespace lmon {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Entry distance of a ray into an oriented box, or +inf. Rays starting
// inside the box do not hit it.
double ray_box(const Point3& o, const Point3& d, const BBox3D& box) {
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  const Point3 rel = o - box.center;
  const double lo[3] = {c * rel.x + s * rel.y, -s * rel.x + c * rel.y, rel.z};
  const double ld[3] = {c * d.x + s * d.y, -s * d.x + c * d.y, d.z};
  const double half[3] = {0.5 * box.size.length, 0.5 * box.size.width, 0.5 * box.size.height};
  double t_near = -kInf;
  double t_far = kInf;
  for (int a = 0; a < 3; ++a) {
    if (std::abs(ld[a]) < 1e-15) {
      if (std::abs(lo[a]) > half[a]) return kInf;
      continue;
    }
    double t1 = (-half[a] - lo[a]) / ld[a];
    double t2 = (half[a] - lo[a]) / ld[a];
    if (t1 > t2) std::swap(t1, t2);
    t_near = std::max(t_near, t1);
    t_far = std::min(t_far, t2);
  }
  if (t_near > t_far || t_near <= 0.0) return kInf;
  return t_near;
}

double ray_ground(const Point3& o, const Point3& d, double slope) {
  const double k = std::tan(slope);
  const double denom = d.z - d.x * k;
  if (denom >= 0.0) return kInf;
  const double t = (k * o.x - o.z) / denom;
  return t > 0.0 ? t : kInf;
}

// Chord [t0, t1] of a ray through a sphere, if any part lies ahead.
std::optional<std::pair<double, double>> ray_sphere(const Point3& o, const Point3& d, const Point3& center,
                                                    double radius) {
  const Point3 oc = o - center;
  const double b = oc.x * d.x + oc.y * d.y + oc.z * d.z;
  const double cc = oc.x * oc.x + oc.y * oc.y + oc.z * oc.z - radius * radius;
  const double disc = b * b - cc;
  if (disc <= 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  const double t0 = std::max(-b - sq, 0.0);
  const double t1 = -b + sq;
  if (t1 <= 0.0) return std::nullopt;
  return std::make_pair(t0, t1);
}

BBox3D make_box(std::string id, std::string label, double x, double y, double ground_z, BoxSize size, double yaw) {
  BBox3D b;
  b.center = {x, y, ground_z + 0.5 * size.height};
  b.size = size;
  b.yaw = yaw;
  b.class_label = std::move(label);
  b.object_id = std::move(id);
  return b;
}

BBox3D grown(const BBox3D& box, double margin) {
  BBox3D out = box;
  out.size.length += 2.0 * margin;
  out.size.width += 2.0 * margin;
  return out;
}

}  // namespace

void Scene::validate() const {
  if (!(std::abs(ground_slope) <= deg_to_rad(10.0))) throw ConfigError("scene slope must be within +-10 degrees");
  for (const auto* list : {&bumps, &obstacles, &overhangs}) {
    for (auto box : *list) {
      box.validate();
      if (box.z_min() < ground_height(box.center.x) - 1e-6 && list != &bumps) {
        throw ConfigError("scene box '" + box.object_id + "' extends below the ground");
      }
    }
  }
  if (spray && (!(spray->radius > 0.0) || spray->point_count < 0)) throw ConfigError("invalid spray cluster");
}

double Scene::ground_height(double x) const { return x * std::tan(ground_slope); }

void LidarConfig::validate() const {
  if (num_layers < 2 || horizontal_resolution < 2) throw ConfigError("lidar needs at least 2 layers and columns");
  if (!(vertical_min < vertical_max)) throw ConfigError("lidar vertical FOV must satisfy min < max");
  if (!(max_range > 0.0)) throw ConfigError("lidar max_range must be > 0");
  if (!(range_noise_sigma >= 0.0)) throw ConfigError("lidar range noise sigma must be >= 0");
}

ProjectionSpec LidarConfig::projection() const {
  ProjectionSpec spec;
  spec.num_rows = num_layers;
  spec.num_cols = horizontal_resolution;
  spec.vertical_min = vertical_min;
  spec.vertical_max = vertical_max;
  spec.azimuth_min = -std::numbers::pi;
  spec.azimuth_max = std::numbers::pi;
  return spec;
}

SynthFrame raycast(const Scene& scene, const LidarConfig& cfg, std::uint64_t seed) {
  scene.validate();
  cfg.validate();
  const ProjectionSpec beams = cfg.projection();
  const Point3 origin = cfg.origin();

  struct Beam {
    Point3 dir;
    double t;
    SurfaceHit hit;
    std::optional<std::pair<double, double>> spray;
  };
  std::vector<Beam> cast;
  cast.reserve(static_cast<std::size_t>(cfg.num_layers) * static_cast<std::size_t>(cfg.horizontal_resolution));
  std::size_t spray_beams = 0;

  for (int row = 0; row < cfg.num_layers; ++row) {
    const double el = beams.row_center(row);
    for (int col = 0; col < cfg.horizontal_resolution; ++col) {
      const double az = beams.col_center(col);
      Beam b{{std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el)}, kInf, {}, std::nullopt};
      b.t = ray_ground(origin, b.dir, scene.ground_slope);
      const auto consider = [&](const std::vector<BBox3D>& boxes, SurfaceKind kind) {
        for (std::size_t i = 0; i < boxes.size(); ++i) {
          const double t = ray_box(origin, b.dir, boxes[i]);
          if (t < b.t) {
            b.t = t;
            b.hit = {kind, static_cast<int>(i)};
          }
        }
      };
      consider(scene.bumps, SurfaceKind::kBump);
      consider(scene.obstacles, SurfaceKind::kObstacle);
      consider(scene.overhangs, SurfaceKind::kOverhang);
      if (scene.spray) {
        b.spray = ray_sphere(origin, b.dir, scene.spray->center, scene.spray->radius);
        if (b.spray && b.spray->first < std::min(b.t, cfg.max_range)) {
          ++spray_beams;
        } else {
          b.spray.reset();
        }
      }
      cast.push_back(b);
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double persistence =
      spray_beams > 0 && scene.spray
          ? std::min(1.0, static_cast<double>(scene.spray->point_count) / static_cast<double>(spray_beams))
          : 0.0;

  SynthFrame out;
  out.cloud.sensor_origin = origin;
  out.visibility.assign(scene.obstacles.size(), 0);
  for (auto& b : cast) {
    double t = b.t;
    SurfaceHit hit = b.hit;
    if (b.spray && unit(rng) < persistence) {
      const double far = std::min({b.spray->second, b.t, cfg.max_range});
      t = b.spray->first + unit(rng) * (far - b.spray->first);
      hit = {SurfaceKind::kSpray, -1};
    }
    if (!(t <= cfg.max_range)) continue;
    const double r = cfg.range_noise_sigma > 0.0 ? t + cfg.range_noise_sigma * noise(rng) : t;
    if (!(r > 0.0)) continue;
    out.cloud.points.push_back(origin + r * b.dir);
    out.surfaces.push_back(hit);
    if (hit.kind == SurfaceKind::kObstacle) ++out.visibility[static_cast<std::size_t>(hit.index)];
  }
  for (const auto& box : scene.obstacles) out.annotations.detections.push_back({box, 1.0});
  return out;
}

std::string to_string(Expectation e) {
  switch (e) {
    case Expectation::kDetectable: return "detectable";
    case Expectation::kTraversable: return "traversable";
    case Expectation::kExpectedFp: return "expected-FP";
  }
  return "unknown";
}

std::vector<ScenarioCase> scenario_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5eed5eedULL);
  std::uniform_real_distribution<double> jitter(-1.0, 1.0);
  const auto j = [&](double amp) { return amp * jitter(rng); };
  const BoxSize car{4.5, 1.8, 1.5};
  const BoxSize pedestrian{0.5, 0.5, 1.7};

  std::vector<ScenarioCase> suite;
  suite.push_back({"flat_road", Scene{}, Expectation::kTraversable});

  Scene slope;
  slope.ground_slope = deg_to_rad(4.0);
  suite.push_back({"slope_4deg", slope, Expectation::kTraversable});

  Scene curb;
  const double curb_y = 4.5 + j(0.5);
  curb.bumps.push_back(make_box("curb_left", "curb", 30.0, curb_y + 5.0, 0.0, {80.0, 10.0, 0.15}, 0.0));
  curb.bumps.push_back(make_box("curb_right", "curb", 30.0, -curb_y - 5.0, 0.0, {80.0, 10.0, 0.15}, 0.0));
  suite.push_back({"curb", curb, Expectation::kTraversable});

  Scene cars;
  cars.obstacles.push_back(make_box("car_0", "car", 10.0 + j(1.0), -3.0 + j(0.5), 0.0, car, j(0.2)));
  cars.obstacles.push_back(make_box("car_1", "car", 18.0 + j(1.0), 3.5 + j(0.5), 0.0, car, j(0.2)));
  cars.obstacles.push_back(make_box("car_2", "car", 28.0 + j(1.0), -1.0 + j(0.5), 0.0, car, j(0.2)));
  suite.push_back({"cars", cars, Expectation::kDetectable});

  Scene peds;
  peds.obstacles.push_back(make_box("ped_0", "pedestrian", 8.0 + j(0.5), 2.0 + j(0.5), 0.0, pedestrian, j(1.0)));
  peds.obstacles.push_back(make_box("ped_1", "pedestrian", 15.0 + j(0.5), -4.0 + j(0.5), 0.0, pedestrian, j(1.0)));
  peds.obstacles.push_back(make_box("ped_2", "pedestrian", 24.0 + j(0.5), 5.0 + j(0.5), 0.0, pedestrian, j(1.0)));
  suite.push_back({"pedestrians", peds, Expectation::kDetectable});

  Scene high;
  high.overhangs.push_back(make_box("overhang", "branch", 14.0 + j(1.0), j(1.0), 3.5, {4.0, 12.0, 1.0}, 0.0));
  suite.push_back({"overhang_high", high, Expectation::kTraversable});

  Scene low;
  low.overhangs.push_back(make_box("overhang", "branch", 14.0 + j(1.0), j(1.0), 2.0, {4.0, 12.0, 0.5}, 0.0));
  suite.push_back({"overhang_low", low, Expectation::kExpectedFp});

  Scene pair;
  const double pair_y = j(1.0);
  pair.obstacles.push_back(make_box("truck", "truck", 15.0, pair_y, 0.0, {6.0, 2.6, 3.0}, 0.0));
  pair.obstacles.push_back(make_box("hidden_car", "car", 24.0 + j(1.0), pair_y, 0.0, car, 0.0));
  suite.push_back({"occluded_pair", pair, Expectation::kDetectable});

  Scene spray;
  const double lead_x = 15.0 + j(2.0);
  spray.obstacles.push_back(make_box("lead_car", "car", lead_x, 0.0, 0.0, car, 0.0));
  spray.spray = SprayCluster{{lead_x - 0.5 * car.length - 1.3, 0.0, 0.6}, 0.8, 60};
  suite.push_back({"spray", spray, Expectation::kExpectedFp});

  return suite;
}

std::vector<SuiteFrame> generate_suite_frames(std::size_t count, std::uint64_t base_seed, const LidarConfig& base) {
  constexpr double kSigmas[] = {0.01, 0.02, 0.0, 0.015};
  std::vector<SuiteFrame> frames;
  frames.reserve(count);
  std::vector<ScenarioCase> suite;
  for (std::size_t k = 0; k < count; ++k) {
    if (suite.empty() || k % suite.size() == 0) suite = scenario_suite(base_seed + k);
    SuiteFrame f;
    f.scenario = suite[k % suite.size()];
    f.lidar = base;
    f.lidar.range_noise_sigma = kSigmas[(k / suite.size()) % 4];
    f.seed = base_seed * 1000003ULL + k;
    f.frame = raycast(f.scenario.scene, f.lidar, f.seed);
    f.frame.cloud.frame_id = f.scenario.name + "_" + std::to_string(k);
    f.frame.cloud.timestamp = 0.1 * static_cast<double>(k);
    frames.push_back(std::move(f));
  }
  return frames;
}

ObjectList inject_faults(const SynthFrame& frame, const SafetyZone& zone, const FaultInjection& faults,
                         std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0xfa017ULL);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ObjectList out;
  const auto& truth = frame.annotations.detections;
  std::size_t spawn = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (unit(rng) < faults.spurious_rate) ++spawn;
    if (frame.visibility[i] < faults.min_returns) continue;
    if (unit(rng) < faults.drop_rate) continue;
    out.detections.push_back({truth[i].box, 0.5 + 0.5 * unit(rng)});
  }
  for (std::size_t s = 0; s < spawn; ++s) {
    for (int attempt = 0; attempt < 200; ++attempt) {
      BBox3D box = make_box("spurious_" + std::to_string(s), "car", 3.0 + unit(rng) * (zone.forward_extent - 6.0),
                            (2.0 * unit(rng) - 1.0) * (zone.lateral_extent - 1.0), 0.0, {4.5, 1.8, 1.5},
                            (2.0 * unit(rng) - 1.0) * std::numbers::pi);
      const bool clear = std::none_of(truth.begin(), truth.end(), [&](const Detection& t) {
        return footprints_intersect(grown(box, faults.clearance), t.box);
      });
      if (clear) {
        out.detections.push_back({box, 0.3 + 0.5 * unit(rng)});
        break;
      }
    }
  }
  return out;
}

}  // namespace lmon
