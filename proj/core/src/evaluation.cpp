#include "lmon/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

namespace lmon {
namespace {

std::int64_t bucket_key(std::int64_t bx, std::int64_t by) { return (bx << 32) ^ (by & 0xffffffff); }

// Uniform hash grid with bucket size eps; a closed eps-ball only touches
// the 3x3 buckets around a point.
class NeighbourIndex {
 public:
  NeighbourIndex(std::span<const Point2> pts, double eps) : pts_(pts), eps_(eps) {
    for (std::size_t i = 0; i < pts.size(); ++i) buckets_[key_of(pts[i])].push_back(i);
  }

  void query(std::size_t i, std::vector<std::size_t>& out) const {
    out.clear();
    const auto [bx, by] = coords(pts_[i]);
    const double eps2 = eps_ * eps_;
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const auto it = buckets_.find(bucket_key(bx + dx, by + dy));
        if (it == buckets_.end()) continue;
        for (std::size_t j : it->second) {
          const double ddx = pts_[j].x - pts_[i].x;
          const double ddy = pts_[j].y - pts_[i].y;
          if (ddx * ddx + ddy * ddy <= eps2) out.push_back(j);
        }
      }
    }
    std::sort(out.begin(), out.end());
  }

 private:
  [[nodiscard]] std::pair<std::int64_t, std::int64_t> coords(const Point2& p) const {
    return {static_cast<std::int64_t>(std::floor(p.x / eps_)), static_cast<std::int64_t>(std::floor(p.y / eps_))};
  }
  [[nodiscard]] std::int64_t key_of(const Point2& p) const {
    const auto [bx, by] = coords(p);
    return bucket_key(bx, by);
  }

  std::span<const Point2> pts_;
  double eps_;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> buckets_;
};

bool any_intersects(const BBox3D& box, std::span<const BBox3D> others) {
  return std::any_of(others.begin(), others.end(), [&](const BBox3D& o) { return footprints_intersect(box, o); });
}

}  // namespace

void ClusterParams::validate() const {
  if (eps && !(*eps > 0.0)) throw ConfigError("cluster eps must be > 0");
  if (min_pts < 1) throw ConfigError("cluster min_pts must be >= 1");
}

std::vector<int> dbscan(std::span<const Point2> points, double eps, int min_pts) {
  constexpr int kUnvisited = -2;
  constexpr int kNoise = -1;
  std::vector<int> labels(points.size(), kUnvisited);
  if (points.empty()) return labels;
  const NeighbourIndex index(points, eps);
  std::vector<std::size_t> neighbours;
  std::vector<std::size_t> inner;
  int next = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (labels[i] != kUnvisited) continue;
    index.query(i, neighbours);
    if (neighbours.size() < static_cast<std::size_t>(min_pts)) {
      labels[i] = kNoise;
      continue;
    }
    const int cluster = next++;
    labels[i] = cluster;
    std::vector<std::size_t> frontier(neighbours.begin(), neighbours.end());
    for (std::size_t f = 0; f < frontier.size(); ++f) {
      const std::size_t j = frontier[f];
      if (labels[j] == kNoise) labels[j] = cluster;  // border point
      if (labels[j] != kUnvisited) continue;
      labels[j] = cluster;
      index.query(j, inner);
      if (inner.size() >= static_cast<std::size_t>(min_pts)) {
        frontier.insert(frontier.end(), inner.begin(), inner.end());
      }
    }
  }
  return labels;
}

CellClustering cluster_cells(std::span<const CellIndex> cells, const GridSpec& grid, const ClusterParams& params) {
  params.validate();
  std::vector<CellIndex> sorted(cells.begin(), cells.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

  std::vector<Point2> centers;
  centers.reserve(sorted.size());
  for (const auto& c : sorted) centers.push_back(grid.cell_center(c));
  const auto labels = dbscan(centers, params.eps_for(grid.cell_size), params.min_pts);

  CellClustering out;
  const int count = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
  out.clusters.resize(static_cast<std::size_t>(std::max(count, 0)));
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (labels[i] < 0) {
      out.noise.push_back(sorted[i]);
      continue;
    }
    auto& cl = out.clusters[static_cast<std::size_t>(labels[i])];
    const Point2 c = grid.cell_center(sorted[i]);
    const double h = 0.5 * grid.cell_size;
    if (cl.cells.empty()) {
      cl.min = {c.x - h, c.y - h};
      cl.max = {c.x + h, c.y + h};
    }
    cl.min = {std::min(cl.min.x, c.x - h), std::min(cl.min.y, c.y - h)};
    cl.max = {std::max(cl.max.x, c.x + h), std::max(cl.max.y, c.y + h)};
    cl.cells.push_back(sorted[i]);
  }
  return out;
}

void EvalReport::finalize() {
  precision = tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 1.0;
  recall = tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 1.0;
}

EvalReport& EvalReport::operator+=(const EvalReport& other) {
  fn += other.fn;
  tp += other.tp;
  fp += other.fp;
  fp_noise_cells += other.fp_noise_cells;
  finalize();
  return *this;
}

EvalReport grid_eval(const OccupancyGrid& grid, std::span<const BBox3D> annotations, const SafetyZone& zone,
                     const ClusterParams& cluster, std::span<const BBox3D> ignore) {
  if (!grid.spec.covers(zone)) throw ConfigError("occupancy grid does not cover the safety zone");
  EvalReport report;
  std::vector<std::uint8_t> explained(grid.spec.cell_count(), 0);
  const auto mark = [&](const BBox3D& box) {
    bool hit = false;
    for (const auto& c : box_footprint_cells(box, grid.spec)) {
      explained[grid.spec.linear(c)] = 1;
      hit = hit || grid.is_occupied(c);
    }
    return hit;
  };
  for (const auto& box : annotations) {
    const bool hit = mark(box);
    if (!in_zone(box.center, zone)) continue;
    report.annotations.push_back({box.object_id, hit, 0.0});
    ++(hit ? report.tp : report.fn);
  }
  for (const auto& box : ignore) mark(box);

  std::vector<CellIndex> fp_cells;
  for (const auto& c : grid.occupied_cells()) {
    if (!explained[grid.spec.linear(c)] && cell_in_zone(grid.spec, c, zone)) fp_cells.push_back(c);
  }
  auto clustering = cluster_cells(fp_cells, grid.spec, cluster);
  report.fp = clustering.clusters.size();
  report.fp_noise_cells = clustering.noise.size();
  report.fp_clusters = std::move(clustering.clusters);
  report.finalize();
  return report;
}

EvalReport objectlist_eval(const ObjectList& detections, std::span<const BBox3D> annotations, const SafetyZone& zone,
                           std::span<const BBox3D> ignore) {
  EvalReport report;
  for (const auto& ann : annotations) {
    if (!in_zone(ann.center, zone)) continue;
    AnnotationVerdict v{ann.object_id, false, 0.0};
    for (const auto& det : detections.detections) {
      if (footprints_intersect(ann, det.box)) {
        v.detected = true;
        v.best_iou = std::max(v.best_iou, footprint_iou(ann, det.box));
      }
    }
    ++(v.detected ? report.tp : report.fn);
    report.annotations.push_back(std::move(v));
  }
  for (const auto& det : detections.detections) {
    if (!in_zone(det.box.center, zone)) continue;
    if (any_intersects(det.box, annotations) || any_intersects(det.box, ignore)) continue;
    ++report.fp;
    report.fp_detections.push_back(det.box.object_id);
  }
  report.finalize();
  return report;
}

CoverageReport coverage_analysis(std::span<const CoverageFrame> frames, double margin) {
  CoverageReport out;
  out.bin_labels = {"0", "1", "2", "3-5", "6-10", "11-50", "51+"};
  out.histogram.assign(out.bin_labels.size(), 0);
  std::size_t more_than_two = 0;
  for (const auto& frame : frames) {
    for (const auto& box : frame.annotations) {
      std::size_t n = 0;
      if (frame.cloud != nullptr) {
        n = static_cast<std::size_t>(std::count_if(frame.cloud->points.begin(), frame.cloud->points.end(),
                                                   [&](const Point3& p) { return point_in_box(p, box, margin); }));
      }
      out.entries.push_back({frame.frame_id, box.object_id, n});
      std::size_t bin = 6;
      if (n <= 2) bin = n;
      else if (n <= 5) bin = 3;
      else if (n <= 10) bin = 4;
      else if (n <= 50) bin = 5;
      ++out.histogram[bin];
      if (n > 2) ++more_than_two;
    }
  }
  if (!out.entries.empty()) {
    out.fraction_more_than_two = static_cast<double>(more_than_two) / static_cast<double>(out.entries.size());
  }
  return out;
}

void write_table_csv(std::ostream& os, std::span<const TableRow> rows) {
  os << "setup,filters,FN,FP,TP,precision,recall\n";
  char buf[64];
  for (const auto& row : rows) {
    os << row.setup << ',' << row.filters << ',' << row.report.fn << ',' << row.report.fp << ',' << row.report.tp;
    std::snprintf(buf, sizeof(buf), ",%.6f,%.6f\n", row.report.precision, row.report.recall);
    os << buf;
  }
}

}  // namespace lmon
