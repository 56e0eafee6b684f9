#include "lmon/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lmon {
namespace {

double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(const Point2& a, const Point2& b, const Point2& p) {
  return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
         p.y <= std::max(a.y, b.y);
}

int sign(double v) { return (v > 0.0) - (v < 0.0); }

bool segments_intersect(const Point2& p1, const Point2& p2, const Point2& q1, const Point2& q2) {
  const int d1 = sign(cross(q1, q2, p1));
  const int d2 = sign(cross(q1, q2, p2));
  const int d3 = sign(cross(p1, p2, q1));
  const int d4 = sign(cross(p1, p2, q2));
  if (d1 != d2 && d3 != d4) return true;
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

struct Interval {
  double lo;
  double hi;
};

template <std::size_t N>
Interval project(const std::array<Point2, N>& pts, double ax, double ay) {
  Interval out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& p : pts) {
    const double v = p.x * ax + p.y * ay;
    out.lo = std::min(out.lo, v);
    out.hi = std::max(out.hi, v);
  }
  return out;
}

bool overlaps(Interval a, Interval b, Boundary boundary) {
  const double lo = std::max(a.lo, b.lo);
  const double hi = std::min(a.hi, b.hi);
  return boundary == Boundary::kClosed ? lo <= hi : lo < hi;
}

// Separating-axis test for two convex quadrilaterals given their edge normals.
bool quads_intersect(const std::array<Point2, 4>& a, const std::array<Point2, 4>& b, Boundary boundary) {
  for (const auto* quad : {&a, &b}) {
    for (std::size_t i = 0; i < 2; ++i) {
      const Point2& p = (*quad)[i];
      const Point2& q = (*quad)[i + 1];
      const double nx = -(q.y - p.y);
      const double ny = q.x - p.x;
      if (!overlaps(project(a, nx, ny), project(b, nx, ny), boundary)) return false;
    }
  }
  return true;
}

std::array<Point2, 4> cell_square(const GridSpec& grid, CellIndex c) {
  const double x0 = grid.origin_x() + c.ix * grid.cell_size;
  const double y0 = grid.origin_y() + c.iy * grid.cell_size;
  const double x1 = x0 + grid.cell_size;
  const double y1 = y0 + grid.cell_size;
  return {Point2{x0, y0}, Point2{x1, y0}, Point2{x1, y1}, Point2{x0, y1}};
}

// Sutherland-Hodgman clip of a convex polygon against one half-plane
// (left of edge a->b).
std::vector<Point2> clip(const std::vector<Point2>& poly, const Point2& a, const Point2& b) {
  std::vector<Point2> out;
  if (poly.empty()) return out;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& cur = poly[i];
    const Point2& prev = poly[(i + poly.size() - 1) % poly.size()];
    const double dc = cross(a, b, cur);
    const double dp = cross(a, b, prev);
    if (dc >= 0.0) {
      if (dp < 0.0) {
        const double t = dp / (dp - dc);
        out.push_back({prev.x + t * (cur.x - prev.x), prev.y + t * (cur.y - prev.y)});
      }
      out.push_back(cur);
    } else if (dp >= 0.0) {
      const double t = dp / (dp - dc);
      out.push_back({prev.x + t * (cur.x - prev.x), prev.y + t * (cur.y - prev.y)});
    }
  }
  return out;
}

double polygon_area(const std::vector<Point2>& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2& p = poly[i];
    const Point2& q = poly[(i + 1) % poly.size()];
    a += p.x * q.y - q.x * p.y;
  }
  return 0.5 * std::abs(a);
}

int cell_count_along(double length, double cell) {
  const double n = length / cell;
  const double r = std::round(n);
  if (std::abs(n - r) < 1e-9) return static_cast<int>(r);
  return static_cast<int>(std::ceil(n));
}

}  // namespace

bool point_in_polygon(const Point2& p, const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2& a = poly[i];
    const Point2& b = poly[j];
    if (cross(a, b, p) == 0.0 && on_segment(a, b, p)) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x_at = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x_at) inside = !inside;
    }
  }
  return inside;
}

bool polygon_is_simple(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2& a1 = poly[i];
    const Point2& a2 = poly[(i + 1) % n];
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
      if (adjacent) continue;
      if (segments_intersect(a1, a2, poly[j], poly[(j + 1) % n])) return false;
    }
  }
  return true;
}

bool in_zone(const Point3& p, const SafetyZone& zone) {
  if (!(p.x >= 0.0 && p.x <= zone.forward_extent && std::abs(p.y) <= zone.lateral_extent)) return false;
  if (zone.road_mask.empty()) return true;
  const Point2 q{p.x, p.y};
  return std::any_of(zone.road_mask.begin(), zone.road_mask.end(),
                     [&](const Polygon& poly) { return point_in_polygon(q, poly); });
}

std::array<Point2, 4> footprint_corners(const BBox3D& box) {
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  const double hl = 0.5 * box.size.length;
  const double hw = 0.5 * box.size.width;
  const auto at = [&](double u, double v) {
    return Point2{box.center.x + c * u - s * v, box.center.y + s * u + c * v};
  };
  return {at(-hl, -hw), at(hl, -hw), at(hl, hw), at(-hl, hw)};
}

bool footprints_intersect(const BBox3D& a, const BBox3D& b, Boundary boundary) {
  return quads_intersect(footprint_corners(a), footprint_corners(b), boundary);
}

double footprint_iou(const BBox3D& a, const BBox3D& b) {
  const auto ca = footprint_corners(a);
  const auto cb = footprint_corners(b);
  std::vector<Point2> poly(ca.begin(), ca.end());
  for (std::size_t i = 0; i < 4 && !poly.empty(); ++i) poly = clip(poly, cb[i], cb[(i + 1) % 4]);
  const double inter = polygon_area(poly);
  const double uni = a.size.length * a.size.width + b.size.length * b.size.width - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

bool point_in_box(const Point3& p, const BBox3D& box, double margin) {
  const double dx = p.x - box.center.x;
  const double dy = p.y - box.center.y;
  const double c = std::cos(box.yaw);
  const double s = std::sin(box.yaw);
  const double u = c * dx + s * dy;
  const double v = -s * dx + c * dy;
  return std::abs(u) <= 0.5 * box.size.length + margin && std::abs(v) <= 0.5 * box.size.width + margin &&
         std::abs(p.z - box.center.z) <= 0.5 * box.size.height + margin;
}

void GridSpec::validate() const {
  if (!(cell_size > 0.0)) throw ConfigError("grid cell_size must be > 0");
  if (!(forward > 0.0) || !(backward >= 0.0) || !(lateral > 0.0)) {
    throw ConfigError("grid extents must be positive");
  }
}

int GridSpec::cols_x() const { return cell_count_along(forward + backward, cell_size); }
int GridSpec::cols_y() const { return cell_count_along(2.0 * lateral, cell_size); }

std::optional<CellIndex> GridSpec::cell_of(double x, double y) const {
  const double fx = std::floor((x - origin_x()) / cell_size);
  const double fy = std::floor((y - origin_y()) / cell_size);
  if (!(fx >= 0.0 && fy >= 0.0 && fx < cols_x() && fy < cols_y())) return std::nullopt;
  return CellIndex{static_cast<int>(fx), static_cast<int>(fy)};
}

Point2 GridSpec::cell_center(CellIndex c) const {
  return {origin_x() + (c.ix + 0.5) * cell_size, origin_y() + (c.iy + 0.5) * cell_size};
}

bool GridSpec::covers(const SafetyZone& zone) const {
  return forward >= zone.forward_extent && lateral >= zone.lateral_extent && backward >= 0.0;
}

bool cell_intersects_box(const GridSpec& grid, CellIndex c, const BBox3D& box, Boundary boundary) {
  return quads_intersect(cell_square(grid, c), footprint_corners(box), boundary);
}

std::vector<CellIndex> box_footprint_cells(const BBox3D& box, const GridSpec& grid, Boundary boundary) {
  const auto corners = footprint_corners(box);
  double min_x = corners[0].x, max_x = corners[0].x, min_y = corners[0].y, max_y = corners[0].y;
  for (const auto& p : corners) {
    min_x = std::min(min_x, p.x);
    max_x = std::max(max_x, p.x);
    min_y = std::min(min_y, p.y);
    max_y = std::max(max_y, p.y);
  }
  // One extra cell on each side so closed-boundary touches on cell edges
  // are visited; the exact test decides.
  const int ix0 = std::max(0, static_cast<int>(std::floor((min_x - grid.origin_x()) / grid.cell_size)) - 1);
  const int ix1 = std::min(grid.cols_x() - 1, static_cast<int>(std::floor((max_x - grid.origin_x()) / grid.cell_size)) + 1);
  const int iy0 = std::max(0, static_cast<int>(std::floor((min_y - grid.origin_y()) / grid.cell_size)) - 1);
  const int iy1 = std::min(grid.cols_y() - 1, static_cast<int>(std::floor((max_y - grid.origin_y()) / grid.cell_size)) + 1);
  std::vector<CellIndex> out;
  for (int ix = ix0; ix <= ix1; ++ix) {
    for (int iy = iy0; iy <= iy1; ++iy) {
      const CellIndex c{ix, iy};
      if (quads_intersect(cell_square(grid, c), corners, boundary)) out.push_back(c);
    }
  }
  return out;
}

bool cell_in_zone(const GridSpec& grid, CellIndex c, const SafetyZone& zone) {
  const Point2 center = grid.cell_center(c);
  return in_zone({center.x, center.y, 0.0}, zone);
}

}  // namespace lmon
