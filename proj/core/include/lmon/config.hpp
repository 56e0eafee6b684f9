#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lmon/aux_scores.hpp"
#include "lmon/evaluation.hpp"
#include "lmon/fusion.hpp"
#include "lmon/geometry.hpp"
#include "lmon/monitor.hpp"
#include "lmon/obstacle_filter.hpp"
#include "lmon/projection.hpp"
#include "lmon/types.hpp"

namespace lmon {

/// Where a per-point auxiliary score comes from.
enum class ScoreSource {
  kFile,    // manifest-referenced file; 0 with a warning when absent
  kOracle,  // annotation boxes
  kZero,
  kOne,
};

std::string to_string(ScoreSource s);
ScoreSource score_source_from(const std::string& s);

struct EvalConfig {
  std::vector<double> tau_list{0.1, 0.2, 0.3, 0.5, 0.8};
  std::size_t min_visibility = 3;  // annotations with fewer returns are ignored
  double coverage_margin = 0.1;
};

struct PipelineConfig {
  ProjectionSpec projection;
  ObstacleParams obstacle;
  FusionTable fusion;
  GridSpec grid;
  int min_points = 1;
  ClusterParams cluster;
  SafetyZone zone;
  ScoreSource objectiveness = ScoreSource::kFile;
  ScoreSource semantic = ScoreSource::kFile;
  double oracle_margin = 0.1;
  SemanticWeights semantic_weights;
  double mount_height = 1.8;
  MonitorParams monitor;
  EvalConfig eval;

  /// Throws ConfigError on any inconsistent block.
  void validate() const;
};

/// Parses a JSON config. Every section and key is optional; unknown keys
/// are rejected. `overrides` are `dotted.key=value` pairs applied to the
/// document before parsing; values parse as JSON, else as strings.
PipelineConfig parse_config(const std::string& json_text, const std::vector<std::string>& overrides = {});
PipelineConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});
PipelineConfig default_config(const std::vector<std::string>& overrides = {});

/// Canonical JSON of a config. Parsing it back reproduces the config up to
/// degree/radian rounding.
std::string config_to_json(const PipelineConfig& config);

}  // namespace lmon
