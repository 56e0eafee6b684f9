#include <iostream>
#include <optional>

#include "common.hpp"
#include "lmon/io.hpp"
#include "lmon/pipeline.hpp"
#include "lmon/render.hpp"
#include "worker_pool.hpp"

namespace lmon::cli {
namespace {

struct RunOptions {
  std::vector<std::string> manifests;
  std::string out_dir;
  double tau = 0.5;
  bool render = false;
};

void write_renders(const fs::path& dir, const FrameResult& r) {
  write_channel_pgm(dir / "height.pgm", encode_channel(r.images, r.images.height, kHeightScale), kHeightScale);
  write_channel_pgm(dir / "depth.pgm", encode_channel(r.images, r.images.depth, kDepthScale), kDepthScale);
  io::write_pgm8(dir / "p_o.pgm", encode_scores(r.images, r.scores));
  write_grid_pgm(dir / "grid.pgm", r.grid);
}

// Processes one frame and returns its summary line.
std::string run_frame(const fs::path& manifest, const PipelineConfig& config, const RunOptions& ro) {
  auto frame = load_frame(manifest, config);
  for (const auto& w : frame.warnings) warn(frame.manifest.frame_id + ": " + w);
  std::optional<ObjectList> primary;
  if (frame.has_detections) primary = ObjectList::with_threshold(frame.detections.detections, ro.tau);
  const auto r = process_frame(frame.cloud, *frame.objectiveness, *frame.semantic, config, primary ? &*primary : nullptr);

  const fs::path out(ro.out_dir);
  const std::string name = safe_name(frame.manifest.frame_id);
  char line[512];
  if (r.verdict) {
    io::write_text(out / (name + ".verdict.json"), verdict_json(frame.manifest.frame_id, *r.verdict));
    std::snprintf(line, sizeof line, "%s: %zu/%zu points kept, %zu occupied cells, %zu confirmed, %zu unconfirmed, %zu missed regions",
                  frame.manifest.frame_id.c_str(), r.filtered.size(), frame.cloud.size(), r.grid.occupied_cells().size(),
                  r.verdict->confirmed.size(), r.verdict->unconfirmed.size(), r.verdict->missed_regions.size());
  } else {
    io::write_text(out / (name + ".grid.json"),
                   grid_summary_json(frame.manifest.frame_id, r.grid, r.filtered.size(), frame.cloud.size()));
    std::snprintf(line, sizeof line, "%s: %zu/%zu points kept, %zu occupied cells, no primary list",
                  frame.manifest.frame_id.c_str(), r.filtered.size(), frame.cloud.size(), r.grid.occupied_cells().size());
  }
  if (ro.render) write_renders(out / name, r);
  return line;
}

int run(const GlobalOptions& opts, const RunOptions& ro) {
  const auto config = load_pipeline_config(opts);
  if (!(ro.tau >= 0.0 && ro.tau <= 1.0)) throw ConfigError("--tau must be in [0,1]");
  const auto manifests = manifest_list(ro.manifests);
  fs::create_directories(ro.out_dir);

  std::vector<std::string> lines(manifests.size());
  std::vector<std::string> errors(manifests.size());
  const auto task = [&](std::size_t i) {
    try {
      lines[i] = run_frame(manifests[i], config, ro);
    } catch (const Error& e) {
      errors[i] = e.what();
    }
  };
  if (opts.strict) {
    for (std::size_t i = 0; i < manifests.size(); ++i) {
      task(i);
      if (!errors[i].empty()) throw IoError("frame " + manifests[i].string() + " failed: " + errors[i]);
      std::cout << lines[i] << '\n';
    }
    return kExitOk;
  }
  parallel_for(manifests.size(), opts.jobs, task);
  std::size_t failed = 0;
  for (std::size_t i = 0; i < manifests.size(); ++i) {
    if (errors[i].empty()) {
      std::cout << lines[i] << '\n';
    } else {
      ++failed;
      std::cerr << "error: frame " << manifests[i].string() << ": " << errors[i] << '\n';
    }
  }
  std::cout << manifests.size() - failed << " of " << manifests.size() << " frames processed\n";
  return failed == 0 ? kExitOk : kExitIo;
}

}  // namespace

void add_run_command(CLI::App& app, GlobalOptions& opts, int& exit_code) {
  auto ro = std::make_shared<RunOptions>();
  auto* cmd = app.add_subcommand("run", "Run the monitor on frames and write per-frame verdicts");
  cmd->add_option("manifests", ro->manifests, "Frame manifests or index files")->required();
  cmd->add_option("-o,--out", ro->out_dir, "Output directory")->required();
  cmd->add_option("--tau", ro->tau, "Confidence threshold applied to the primary object list");
  cmd->add_flag("--render", ro->render, "Also write height/depth/P_O/grid PGM images per frame");
  cmd->callback([&opts, &exit_code, ro] { exit_code = run(opts, *ro); });
}

}  // namespace lmon::cli
