#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lmon/geometry.hpp"
#include "lmon/occupancy.hpp"
#include "lmon/types.hpp"

namespace lmon {

struct ClusterParams {
  std::optional<double> eps;  // [m]; unset: 1.5 x cell size
  int min_pts = 1;

  [[nodiscard]] double eps_for(double cell_size) const { return eps.value_or(1.5 * cell_size); }
  void validate() const;
};

/// DBSCAN over 2D points with closed eps-neighbourhoods. Returns one label
/// per point; clusters are numbered 0.. in order of their lowest-index core
/// point, noise is -1.
std::vector<int> dbscan(std::span<const Point2> points, double eps, int min_pts);

struct CellCluster {
  std::vector<CellIndex> cells;
  Point2 min;  // bounds of the member cell squares
  Point2 max;
};

/// Clusters grid cells on their centre coordinates. With min_pts = 1 every
/// cell lands in exactly one cluster. Noise cells are returned separately.
struct CellClustering {
  std::vector<CellCluster> clusters;
  std::vector<CellIndex> noise;
};

CellClustering cluster_cells(std::span<const CellIndex> cells, const GridSpec& grid, const ClusterParams& params);

struct AnnotationVerdict {
  std::string object_id;
  bool detected = false;
  double best_iou = 0.0;  // object-list evaluation only
};

struct EvalReport {
  std::size_t fn = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;  // grid: FP clusters; object list: FP detections
  std::size_t fp_noise_cells = 0;
  double precision = 1.0;
  double recall = 1.0;
  std::vector<AnnotationVerdict> annotations;
  std::vector<CellCluster> fp_clusters;
  std::vector<std::string> fp_detections;

  void finalize();  // derives precision/recall; 1 when the denominator is 0
  EvalReport& operator+=(const EvalReport& other);  // counts only
};

/// Grid-versus-annotation evaluation. In-zone annotations are TP when an
/// occupied cell intersects their footprint. Occupied in-zone cells that
/// touch no annotation or ignore region are clustered; each cluster is one
/// FP. `ignore` boxes (e.g. fully occluded objects) are excluded from
/// FN/TP accounting but still absorb occupied cells.
EvalReport grid_eval(const OccupancyGrid& grid, std::span<const BBox3D> annotations, const SafetyZone& zone,
                     const ClusterParams& cluster, std::span<const BBox3D> ignore = {});

/// Object-list evaluation with footprint overlap (IoU > 0, touching
/// included) as the match criterion.
EvalReport objectlist_eval(const ObjectList& detections, std::span<const BBox3D> annotations, const SafetyZone& zone,
                           std::span<const BBox3D> ignore = {});

struct CoverageEntry {
  std::string frame_id;
  std::string object_id;
  std::size_t returns = 0;
};

struct CoverageReport {
  std::vector<CoverageEntry> entries;
  /// Bin labels and counts: 0, 1, 2, 3-5, 6-10, 11-50, 51+.
  std::vector<std::string> bin_labels;
  std::vector<std::size_t> histogram;
  double fraction_more_than_two = 1.0;
};

struct CoverageFrame {
  std::string frame_id;
  const PointCloud* cloud = nullptr;
  std::vector<BBox3D> annotations;
};

/// Counts points inside each annotation box (grown by `margin`).
CoverageReport coverage_analysis(std::span<const CoverageFrame> frames, double margin = 0.0);

/// A row of the summary table.
struct TableRow {
  std::string setup;
  std::string filters;
  EvalReport report;
};

void write_table_csv(std::ostream& os, std::span<const TableRow> rows);

}  // namespace lmon
