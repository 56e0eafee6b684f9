#pragma once

#include <string>
#include <vector>

#include "lmon/evaluation.hpp"
#include "lmon/occupancy.hpp"
#include "lmon/types.hpp"

namespace lmon {

struct MonitorParams {
  /// Exclude detections without occupied support from the corrected list.
  /// When false they stay in the corrected list and are only flagged.
  bool drop_unconfirmed = true;
  ClusterParams cluster;
  double box_z_min = 0.3;  // vertical band of synthetic boxes
  double box_z_max = 2.8;
};

struct MissedRegion {
  CellCluster cluster;
  BBox3D box;  // axis-aligned cover of the cluster cells
};

struct MonitorVerdict {
  std::vector<Detection> confirmed;
  std::vector<Detection> unconfirmed;
  std::vector<Detection> outside_zone;  // passed through unchecked
  std::vector<MissedRegion> missed_regions;
  ObjectList corrected;
};

/// Cross-checks the primary object list against the occupancy grid.
MonitorVerdict validate(const ObjectList& objects, const OccupancyGrid& grid, const SafetyZone& zone,
                        const MonitorParams& params = {});

}  // namespace lmon
