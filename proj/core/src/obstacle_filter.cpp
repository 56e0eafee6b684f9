#include "lmon/obstacle_filter.hpp"

#include <algorithm>
#include <cmath>

namespace lmon {
namespace {

struct Return {
  int row;
  double height;
  double planar;
};

std::vector<Return> column_returns(const RangeImages& images, int col) {
  std::vector<Return> out;
  for (int r = 0; r < images.rows(); ++r) {
    if (images.empty(r, col)) continue;
    out.push_back({r, images.height(r, col), images.planar(r, col)});
  }
  return out;
}

// Incline of returns[k] against the first lower return that is at least
// `baseline` nearer; falls back to the lowest return of the column.
double incline_below(const std::vector<Return>& returns, std::size_t k, double baseline) {
  if (k == 0) return 0.0;
  const Return& q = returns[k];
  std::size_t ref = k - 1;
  while (ref > 0 && q.planar - returns[ref].planar < baseline) --ref;
  const double dh = q.height - returns[ref].height;
  const double dd = std::max(q.planar - returns[ref].planar, baseline);
  return std::atan2(dh, dd);
}

}  // namespace

void ObstacleParams::validate() const {
  if (!(alpha_road > 0.0 && alpha_road < theta_full && theta_full <= std::numbers::pi / 2)) {
    throw ConfigError("obstacle params need 0 < alpha_road < theta_full <= pi/2");
  }
  if (!(h_t > 0.0 && h_t < h_c)) throw ConfigError("obstacle params need 0 < h_t < h_c");
  if (!(min_baseline >= 0.0) || !(height_tolerance >= 0.0)) {
    throw ConfigError("obstacle baseline and height tolerance must be >= 0");
  }
  if (!std::isfinite(h_seed_max)) throw ConfigError("h_seed_max must be finite");
}

RoadEstimate estimate_road_height(const RangeImages& images, const ObstacleParams& params) {
  params.validate();
  const int cols = images.cols();
  RoadEstimate out;
  out.height.assign(cols, 0.0);
  out.road_found.assign(cols, false);
  out.column_covered.assign(cols, false);
  out.last_road_row.assign(cols, -1);
  const double slope = std::tan(params.alpha_road);

  for (int c = 0; c < cols; ++c) {
    const auto returns = column_returns(images, c);
    if (returns.empty()) continue;
    out.column_covered[c] = true;
    if (returns.front().height > params.h_seed_max) continue;

    const Return* anchor = &returns.front();
    const Return* last_road = anchor;
    for (std::size_t k = 1; k < returns.size(); ++k) {
      const Return& q = returns[k];
      const double dd = q.planar - anchor->planar;
      const double dh = q.height - anchor->height;
      if (dh - params.height_tolerance > slope * std::max(dd, params.min_baseline)) break;
      last_road = &q;
      if (dd >= params.min_baseline) anchor = &q;
    }
    out.height[c] = last_road->height;
    out.road_found[c] = true;
    out.last_road_row[c] = last_road->row;
  }
  return out;
}

double incline_ramp(double incline, const ObstacleParams& params) {
  return std::clamp((incline - params.alpha_road) / (params.theta_full - params.alpha_road), 0.0, 1.0);
}

double obstacle_score_value(double h, double incline, const ObstacleParams& params) {
  if (h < 0.0 || h > params.h_c) return 0.0;
  if (h >= params.h_t) return 1.0;
  return incline_ramp(incline, params);
}

ScoreImage obstacle_score(const RangeImages& images, const RoadEstimate& road, const ObstacleParams& params) {
  params.validate();
  if (road.height.size() != static_cast<std::size_t>(images.cols()) ||
      road.last_road_row.size() != static_cast<std::size_t>(images.cols())) {
    throw InputError("road estimate does not match range image width");
  }
  ScoreImage out;
  out.p_o = Image<double>(images.rows(), images.cols(), 0.0);
  out.road_height = road.height;
  out.road_found = road.road_found;
  out.column_covered = road.column_covered;

  for (int c = 0; c < images.cols(); ++c) {
    const auto returns = column_returns(images, c);
    for (std::size_t k = 0; k < returns.size(); ++k) {
      const double h = returns[k].height - road.height[c];
      double score = 0.0;
      if (returns[k].row > road.last_road_row[c] && h >= 0.0 && h <= params.h_c) {
        score = h >= params.h_t ? 1.0 : incline_ramp(incline_below(returns, k, params.min_baseline), params);
      }
      out.p_o(returns[k].row, c) = score;
    }
  }
  return out;
}

ScoreImage obstacle_score(const RangeImages& images, const ObstacleParams& params) {
  return obstacle_score(images, estimate_road_height(images, params), params);
}

}  // namespace lmon
