#include "lmon/occupancy.hpp"

#include <numeric>

namespace lmon {

std::vector<CellIndex> OccupancyGrid::occupied_cells() const {
  std::vector<CellIndex> out;
  for (std::size_t i = 0; i < occupied.size(); ++i) {
    if (occupied[i] != 0) out.push_back(spec.unlinear(i));
  }
  return out;
}

std::uint64_t OccupancyGrid::total_count() const {
  return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

OccupancyGrid build_grid(const PointCloud& cloud, const GridSpec& spec, int min_points) {
  spec.validate();
  if (min_points < 1) throw ConfigError("occupancy min_points must be >= 1");
  OccupancyGrid grid;
  grid.spec = spec;
  grid.min_points = min_points;
  grid.counts.assign(spec.cell_count(), 0);
  grid.occupied.assign(spec.cell_count(), 0);
  for (const auto& p : cloud.points) {
    if (const auto cell = spec.cell_of(p.x, p.y)) ++grid.counts[spec.linear(*cell)];
  }
  for (std::size_t i = 0; i < grid.counts.size(); ++i) {
    grid.occupied[i] = grid.counts[i] >= static_cast<std::uint32_t>(min_points) ? 1 : 0;
  }
  return grid;
}

}  // namespace lmon
