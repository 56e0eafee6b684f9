#pragma once

#include <cstdint>
#include <vector>

#include "lmon/geometry.hpp"
#include "lmon/types.hpp"

namespace lmon {

/// Single-frame count grid. A cell is occupied iff it holds at least
/// `min_points` points.
struct OccupancyGrid {
  GridSpec spec;
  int min_points = 1;
  std::vector<std::uint32_t> counts;
  std::vector<std::uint8_t> occupied;

  [[nodiscard]] std::uint32_t count(CellIndex c) const { return counts[spec.linear(c)]; }
  [[nodiscard]] bool is_occupied(CellIndex c) const { return occupied[spec.linear(c)] != 0; }
  [[nodiscard]] std::vector<CellIndex> occupied_cells() const;
  [[nodiscard]] std::uint64_t total_count() const;
};

OccupancyGrid build_grid(const PointCloud& cloud, const GridSpec& spec, int min_points = 1);

}  // namespace lmon
