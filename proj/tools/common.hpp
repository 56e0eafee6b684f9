#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lmon/config.hpp"

namespace lmon::cli {

namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitIo = 2;
inline constexpr int kExitCriteria = 3;

struct GlobalOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  unsigned jobs = 1;
  bool strict = false;
};

PipelineConfig load_pipeline_config(const GlobalOptions& opts);

/// Manifest arguments expanded through index files; throws IoError if empty.
std::vector<fs::path> manifest_list(const std::vector<std::string>& args);

/// Replaces characters that are awkward in file names.
std::string safe_name(const std::string& frame_id);

void warn(const std::string& message);

void add_run_command(CLI::App& app, GlobalOptions& opts, int& exit_code);
void add_eval_command(CLI::App& app, GlobalOptions& opts, int& exit_code);
void add_synth_command(CLI::App& app, GlobalOptions& opts, int& exit_code);
void add_render_command(CLI::App& app, GlobalOptions& opts, int& exit_code);
void add_coverage_command(CLI::App& app, GlobalOptions& opts, int& exit_code);

}  // namespace lmon::cli
