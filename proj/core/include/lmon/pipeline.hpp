#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lmon/config.hpp"
#include "lmon/fusion.hpp"
#include "lmon/io.hpp"
#include "lmon/monitor.hpp"
#include "lmon/obstacle_filter.hpp"
#include "lmon/occupancy.hpp"
#include "lmon/projection.hpp"

namespace lmon {

/// Everything one frame produces on its way from the cloud to the verdict.
struct FrameResult {
  RangeImages images;
  ScoreImage scores;
  ScoredCloud scored;
  PointCloud filtered;
  OccupancyGrid grid;
  std::optional<MonitorVerdict> verdict;  // set when a primary list was given
};

/// project -> obstacle_score -> aux scores -> fuse -> build_grid, then
/// validate against `primary` if given.
FrameResult process_frame(const PointCloud& cloud, const ScoreProvider& objectiveness, const ScoreProvider& semantic,
                          const PipelineConfig& config, const ObjectList* primary = nullptr);

/// Runs the stages up to and including the obstacle score. Useful when
/// several fusion setups share one frame.
struct FrameGeometry {
  RangeImages images;
  ScoreImage scores;
};

FrameGeometry frame_geometry(const PointCloud& cloud, const PipelineConfig& config);

/// Fusion and gridding on precomputed geometry.
OccupancyGrid fused_grid(const PointCloud& cloud, const FrameGeometry& geometry, const ScoreProvider& objectiveness,
                         const ScoreProvider& semantic, const FusionTable& table, const PipelineConfig& config);

/// A frame loaded from its manifest, with score providers resolved from
/// the config.
struct LoadedFrame {
  io::FrameManifest manifest;
  PointCloud cloud;
  std::vector<io::BoxRecord> annotations;  // empty when the manifest has none
  bool has_annotations = false;
  ObjectList detections;  // primary detector output, unthresholded
  bool has_detections = false;
  std::unique_ptr<ScoreProvider> objectiveness;
  std::unique_ptr<ScoreProvider> semantic;
  std::vector<std::string> warnings;

  [[nodiscard]] std::vector<BBox3D> annotation_boxes() const;
  /// Annotations with a recorded visibility below `min_visibility`.
  [[nodiscard]] std::vector<BBox3D> ignored_boxes(std::size_t min_visibility) const;
  [[nodiscard]] std::vector<BBox3D> evaluated_boxes(std::size_t min_visibility) const;
};

/// Throws IoError (prefixed with the manifest path) on missing or corrupt
/// files. A missing optional score file falls back to a zero score and
/// records a warning.
LoadedFrame load_frame(const std::filesystem::path& manifest_path, const PipelineConfig& config);

std::unique_ptr<ScoreProvider> make_provider(ScoreSource source, const std::vector<BBox3D>& annotations,
                                             double oracle_margin);

}  // namespace lmon
