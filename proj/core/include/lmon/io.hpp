#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lmon/aux_scores.hpp"
#include "lmon/image.hpp"
#include "lmon/types.hpp"

namespace lmon::io {

namespace fs = std::filesystem;

/// Raw point cloud: little-endian float32 records (x, y, z, intensity),
/// 16 bytes per point, no header.
struct RawCloud {
  std::vector<Point3> points;
  std::vector<float> intensity;
  std::size_t dropped_non_finite = 0;
};

/// Throws IoError if the file is missing or its size is not a multiple of 16.
RawCloud read_cloud_bin(const fs::path& path);
void write_cloud_bin(const fs::path& path, const std::vector<Point3>& points, const std::vector<float>& intensity = {});

/// Box record in annotation / detection files. `visibility` is written by
/// the synthesizer and records the number of returns on the object.
struct BoxRecord {
  BBox3D box;
  double confidence = 1.0;
  std::optional<std::size_t> visibility;
};

std::vector<BoxRecord> read_boxes_json(const fs::path& path);
void write_boxes_json(const fs::path& path, const std::vector<BoxRecord>& boxes);

CameraCalibration read_calibration_json(const fs::path& path);
void write_calibration_json(const fs::path& path, const CameraCalibration& calib);

/// Per-frame manifest. Relative paths are resolved against the manifest's
/// directory on load.
struct FrameManifest {
  std::string frame_id;
  double timestamp = 0.0;
  fs::path pointcloud_path;
  std::optional<fs::path> annotations_path;
  std::optional<fs::path> objectiveness_path;
  std::optional<fs::path> semantic_image_path;
  std::optional<fs::path> camera_calib_path;
  std::optional<fs::path> detections_path;  // primary detector output
  std::optional<Point3> sensor_origin;      // LiDAR position in the vehicle frame
};

FrameManifest read_manifest(const fs::path& path);
/// Writes paths relative to the manifest directory when possible.
void write_manifest(const fs::path& path, const FrameManifest& manifest);

/// Expands a list of manifest or index files (a JSON array of manifest
/// paths) into manifest paths.
std::vector<fs::path> expand_manifests(const std::vector<fs::path>& inputs);

/// Loads the point cloud of a manifest into the vehicle frame.
PointCloud load_frame_cloud(const FrameManifest& manifest, const Point3& default_origin);

/// Binary PGM (P5). 8-bit images, and 16-bit images stored big-endian.
void write_pgm8(const fs::path& path, const Image<std::uint8_t>& image);
void write_pgm16(const fs::path& path, const Image<std::uint16_t>& image);
Image<std::uint8_t> read_pgm8(const fs::path& path);
Image<std::uint16_t> read_pgm16(const fs::path& path);

/// Objectiveness grid: raw float32 row-major data at `path` and a sidecar
/// `<path>.json` with {rows, cols, extent_m}.
ObjectivenessGrid read_objectiveness(const fs::path& path);
void write_objectiveness(const fs::path& path, const ObjectivenessGrid& grid);

/// Semantic labels: 8-bit PGM of class ids at `path`, sidecar
/// `<path>.json` with {relevant_classes: [...]}, and a calibration file.
SemanticImage read_semantic_image(const fs::path& path, const fs::path& calib_path);
void write_semantic_image(const fs::path& path, const Image<std::uint8_t>& labels, const std::set<int>& relevant);

fs::path sidecar_path(const fs::path& path);
void write_text(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);

}  // namespace lmon::io
