#include "lmon/pipeline.hpp"

namespace lmon {

FrameGeometry frame_geometry(const PointCloud& cloud, const PipelineConfig& config) {
  FrameGeometry g;
  g.images = project(cloud, config.projection);
  g.scores = obstacle_score(g.images, config.obstacle);
  return g;
}

OccupancyGrid fused_grid(const PointCloud& cloud, const FrameGeometry& geometry, const ScoreProvider& objectiveness,
                         const ScoreProvider& semantic, const FusionTable& table, const PipelineConfig& config) {
  const auto scored = score_points(cloud, geometry.images, geometry.scores, objectiveness, semantic, table);
  return build_grid(filter_cloud(cloud, scored), config.grid, config.min_points);
}

FrameResult process_frame(const PointCloud& cloud, const ScoreProvider& objectiveness, const ScoreProvider& semantic,
                          const PipelineConfig& config, const ObjectList* primary) {
  FrameResult r;
  auto geometry = frame_geometry(cloud, config);
  r.images = std::move(geometry.images);
  r.scores = std::move(geometry.scores);
  r.scored = score_points(cloud, r.images, r.scores, objectiveness, semantic, config.fusion);
  r.filtered = filter_cloud(cloud, r.scored);
  r.grid = build_grid(r.filtered, config.grid, config.min_points);
  if (primary) r.verdict = validate(*primary, r.grid, config.zone, config.monitor);
  return r;
}

std::vector<BBox3D> LoadedFrame::annotation_boxes() const {
  std::vector<BBox3D> out;
  out.reserve(annotations.size());
  for (const auto& a : annotations) out.push_back(a.box);
  return out;
}

std::vector<BBox3D> LoadedFrame::ignored_boxes(std::size_t min_visibility) const {
  std::vector<BBox3D> out;
  for (const auto& a : annotations) {
    if (a.visibility && *a.visibility < min_visibility) out.push_back(a.box);
  }
  return out;
}

std::vector<BBox3D> LoadedFrame::evaluated_boxes(std::size_t min_visibility) const {
  std::vector<BBox3D> out;
  for (const auto& a : annotations) {
    if (!a.visibility || *a.visibility >= min_visibility) out.push_back(a.box);
  }
  return out;
}

std::unique_ptr<ScoreProvider> make_provider(ScoreSource source, const std::vector<BBox3D>& annotations,
                                             double oracle_margin) {
  switch (source) {
    case ScoreSource::kOracle:
      return std::make_unique<OracleProvider>(annotations, oracle_margin);
    case ScoreSource::kOne:
      return std::make_unique<ConstantProvider>(1.0);
    case ScoreSource::kZero:
    case ScoreSource::kFile:
      break;
  }
  return std::make_unique<ConstantProvider>(0.0);
}

LoadedFrame load_frame(const std::filesystem::path& manifest_path, const PipelineConfig& config) {
  LoadedFrame f;
  try {
    f.manifest = io::read_manifest(manifest_path);
    f.cloud = io::load_frame_cloud(f.manifest, {0.0, 0.0, config.mount_height});
    if (f.manifest.annotations_path) {
      f.annotations = io::read_boxes_json(*f.manifest.annotations_path);
      f.has_annotations = true;
    }
    if (f.manifest.detections_path) {
      for (const auto& r : io::read_boxes_json(*f.manifest.detections_path)) f.detections.detections.push_back({r.box, r.confidence});
      f.has_detections = true;
    }
    const auto boxes = f.annotation_boxes();
    if ((config.objectiveness == ScoreSource::kOracle || config.semantic == ScoreSource::kOracle) && !f.has_annotations) {
      throw IoError("oracle score source needs annotations, but the manifest has none");
    }

    if (config.objectiveness == ScoreSource::kFile) {
      if (f.manifest.objectiveness_path && std::filesystem::exists(*f.manifest.objectiveness_path)) {
        f.objectiveness = std::make_unique<ObjectivenessProvider>(io::read_objectiveness(*f.manifest.objectiveness_path));
      } else {
        f.warnings.push_back("no objectiveness file, using P_N = 0");
      }
    }
    if (!f.objectiveness) f.objectiveness = make_provider(config.objectiveness, boxes, config.oracle_margin);

    if (config.semantic == ScoreSource::kFile) {
      if (f.manifest.semantic_image_path && f.manifest.camera_calib_path &&
          std::filesystem::exists(*f.manifest.semantic_image_path)) {
        f.semantic = std::make_unique<SemanticProvider>(
            io::read_semantic_image(*f.manifest.semantic_image_path, *f.manifest.camera_calib_path),
            config.semantic_weights);
      } else {
        f.warnings.push_back("no semantic image, using P_S = 0");
      }
    }
    if (!f.semantic) f.semantic = make_provider(config.semantic, boxes, config.oracle_margin);
  } catch (const Error& e) {
    throw IoError(manifest_path.string() + ": " + e.what());
  }
  return f;
}

}  // namespace lmon
