#pragma once

#include <numbers>
#include <span>
#include <vector>

#include "lmon/image.hpp"
#include "lmon/projection.hpp"

namespace lmon {

inline constexpr double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

/// Parameters of the model-based obstacle score.
///
/// Heights are relative to the per-column road height estimate. Inclines
/// are measured between a return and a lower return at least
/// `min_baseline` metres nearer in planar distance; the planar term is
/// floored at `min_baseline`. With `min_baseline = 0` and
/// `height_tolerance = 0` the incline is taken between directly adjacent
/// returns.
struct ObstacleParams {
  double alpha_road = deg_to_rad(5.0);    // max road incline
  double h_c = 2.8;                       // min ceiling clearance
  double h_t = 0.3;                       // unconditionally relevant height
  double theta_full = deg_to_rad(45.0);   // incline where the ambiguous score saturates
  double h_seed_max = 0.5;                // max height of the first road return
  double min_baseline = 0.25;             // [m] planar baseline for incline measurement
  double height_tolerance = 0.05;         // [m] height noise allowance of the road walk

  void validate() const;
};

struct ScoreImage {
  Image<double> p_o;                 // meaningful where the range image is non-EMPTY
  std::vector<double> road_height;   // h_r per column
  std::vector<bool> road_found;      // false: no road-classified return, h_r = 0
  std::vector<bool> column_covered;  // false: column entirely EMPTY
};

/// Per-column road-surface height from a bottom-up incline walk.
/// Returns up to `last_road_row` belong to the road and score P_O = 0, so a
/// falling road does not rise above the height of its farthest return.
struct RoadEstimate {
  std::vector<double> height;
  std::vector<bool> road_found;
  std::vector<bool> column_covered;
  std::vector<int> last_road_row;  // -1 without road
};

RoadEstimate estimate_road_height(const RangeImages& images, const ObstacleParams& params);

/// Ambiguous-band score: linear in incline from alpha_road (0) to theta_full (1).
double incline_ramp(double incline, const ObstacleParams& params);

/// Score for a return `height_above_road` above the road surface with the
/// given incline towards its lower neighbour.
double obstacle_score_value(double height_above_road, double incline, const ObstacleParams& params);

ScoreImage obstacle_score(const RangeImages& images, const RoadEstimate& road, const ObstacleParams& params);

/// Convenience: estimate_road_height followed by obstacle_score.
ScoreImage obstacle_score(const RangeImages& images, const ObstacleParams& params);

}  // namespace lmon
