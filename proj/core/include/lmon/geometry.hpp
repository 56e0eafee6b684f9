#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <compare>
#include <optional>
#include <span>
#include <vector>

#include "lmon/types.hpp"

namespace lmon {

/// True iff `p` is in the zone rectangle and, when a road mask is given,
/// inside at least one mask polygon. Boundaries are inclusive.
bool in_zone(const Point3& p, const SafetyZone& zone);

/// Closed point-in-polygon test (points on an edge are inside).
bool point_in_polygon(const Point2& p, const Polygon& poly);

/// True iff the polygon has no two non-adjacent edges that intersect.
bool polygon_is_simple(const Polygon& poly);

/// The four footprint corners of a box, counter-clockwise.
std::array<Point2, 4> footprint_corners(const BBox3D& box);

/// Whether touching boundaries count as intersecting.
enum class Boundary { kClosed, kOpen };

/// Separating-axis test between two yaw-rotated footprints.
bool footprints_intersect(const BBox3D& a, const BBox3D& b, Boundary boundary = Boundary::kClosed);

/// Intersection-over-union of the 2D footprints.
double footprint_iou(const BBox3D& a, const BBox3D& b);

/// True iff `p` lies inside the box grown by `margin` on every face.
bool point_in_box(const Point3& p, const BBox3D& box, double margin = 0.0);

struct CellIndex {
  int ix = 0;  // along x (forward)
  int iy = 0;  // along y (left)
  friend auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

/// Ego-centric 2D grid layout. Covers x in [-backward, forward] and
/// y in [-lateral, lateral].
struct GridSpec {
  double cell_size = 0.2;
  double forward = 40.0;
  double backward = 4.0;
  double lateral = 12.5;

  void validate() const;

  [[nodiscard]] int cols_x() const;
  [[nodiscard]] int cols_y() const;
  [[nodiscard]] std::size_t cell_count() const {
    return static_cast<std::size_t>(cols_x()) * static_cast<std::size_t>(cols_y());
  }
  [[nodiscard]] double origin_x() const { return -backward; }
  [[nodiscard]] double origin_y() const { return -lateral; }

  /// Cell containing (x, y); cells are half-open [lo, hi). nullopt outside.
  [[nodiscard]] std::optional<CellIndex> cell_of(double x, double y) const;
  [[nodiscard]] Point2 cell_center(CellIndex c) const;
  [[nodiscard]] std::size_t linear(CellIndex c) const {
    return static_cast<std::size_t>(c.ix) * static_cast<std::size_t>(cols_y()) + static_cast<std::size_t>(c.iy);
  }
  [[nodiscard]] CellIndex unlinear(std::size_t i) const {
    return {static_cast<int>(i / static_cast<std::size_t>(cols_y())),
            static_cast<int>(i % static_cast<std::size_t>(cols_y()))};
  }
  [[nodiscard]] bool contains(CellIndex c) const { return c.ix >= 0 && c.iy >= 0 && c.ix < cols_x() && c.iy < cols_y(); }

  /// True iff the grid covers the zone rectangle.
  [[nodiscard]] bool covers(const SafetyZone& zone) const;
};

/// Whether the square of cell `c` intersects the box footprint.
bool cell_intersects_box(const GridSpec& grid, CellIndex c, const BBox3D& box, Boundary boundary = Boundary::kClosed);

/// Cells whose square intersects the yaw-rotated footprint of `box`,
/// sorted by (ix, iy). Empty if the footprint lies outside the grid.
std::vector<CellIndex> box_footprint_cells(const BBox3D& box, const GridSpec& grid,
                                           Boundary boundary = Boundary::kClosed);

/// Whether a cell counts as in-zone (its center satisfies in_zone).
bool cell_in_zone(const GridSpec& grid, CellIndex c, const SafetyZone& zone);

}  // namespace lmon
