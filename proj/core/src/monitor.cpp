#include "lmon/monitor.hpp"

#include <string>

namespace lmon {

MonitorVerdict validate(const ObjectList& objects, const OccupancyGrid& grid, const SafetyZone& zone,
                        const MonitorParams& params) {
  zone.validate();
  if (!grid.spec.covers(zone)) throw ConfigError("occupancy grid does not cover the safety zone");
  if (!(params.box_z_min < params.box_z_max)) throw ConfigError("monitor box band must satisfy min < max");

  MonitorVerdict verdict;
  std::vector<std::uint8_t> covered(grid.spec.cell_count(), 0);
  for (const auto& det : objects.detections) {
    bool supported = false;
    for (const auto& c : box_footprint_cells(det.box, grid.spec)) {
      covered[grid.spec.linear(c)] = 1;
      supported = supported || grid.is_occupied(c);
    }
    if (!in_zone(det.box.center, zone)) {
      verdict.outside_zone.push_back(det);
    } else if (supported) {
      verdict.confirmed.push_back(det);
    } else {
      verdict.unconfirmed.push_back(det);
    }
  }

  std::vector<CellIndex> uncovered;
  for (const auto& c : grid.occupied_cells()) {
    if (!covered[grid.spec.linear(c)] && cell_in_zone(grid.spec, c, zone)) uncovered.push_back(c);
  }
  auto clustering = cluster_cells(uncovered, grid.spec, params.cluster);
  // Noise cells (only possible with min_pts > 1) still mark a presence.
  for (const auto& c : clustering.noise) {
    const Point2 center = grid.spec.cell_center(c);
    const double h = 0.5 * grid.spec.cell_size;
    clustering.clusters.push_back({{c}, {center.x - h, center.y - h}, {center.x + h, center.y + h}});
  }

  verdict.corrected.tau_conf = objects.tau_conf;
  verdict.corrected.detections = verdict.confirmed;
  if (!params.drop_unconfirmed) {
    verdict.corrected.detections.insert(verdict.corrected.detections.end(), verdict.unconfirmed.begin(),
                                        verdict.unconfirmed.end());
  }
  verdict.corrected.detections.insert(verdict.corrected.detections.end(), verdict.outside_zone.begin(),
                                      verdict.outside_zone.end());

  for (std::size_t k = 0; k < clustering.clusters.size(); ++k) {
    auto& cl = clustering.clusters[k];
    BBox3D box;
    box.center = {0.5 * (cl.min.x + cl.max.x), 0.5 * (cl.min.y + cl.max.y), 0.5 * (params.box_z_min + params.box_z_max)};
    box.size = {cl.max.x - cl.min.x, cl.max.y - cl.min.y, params.box_z_max - params.box_z_min};
    box.yaw = 0.0;
    box.class_label = "unknown";
    box.object_id = "missed_" + std::to_string(k);
    verdict.corrected.detections.push_back({box, 1.0});
    verdict.missed_regions.push_back({std::move(cl), box});
  }
  return verdict;
}

}  // namespace lmon
