#include <cstdio>
#include <iostream>
#include <sstream>

#include "common.hpp"
#include "lmon/evaluation.hpp"
#include "lmon/io.hpp"
#include "lmon/pipeline.hpp"
#include "lmon/render.hpp"
#include "worker_pool.hpp"

namespace lmon::cli {
namespace {

struct RenderOptions {
  std::vector<std::string> manifests;
  std::string out_dir;
};

int render(const GlobalOptions& opts, const RenderOptions& ro) {
  const auto config = load_pipeline_config(opts);
  const auto manifests = manifest_list(ro.manifests);
  parallel_for(manifests.size(), opts.jobs, [&](std::size_t i) {
    const auto frame = load_frame(manifests[i], config);
    for (const auto& w : frame.warnings) warn(frame.manifest.frame_id + ": " + w);
    const auto r = process_frame(frame.cloud, *frame.objectiveness, *frame.semantic, config);
    const fs::path dir = fs::path(ro.out_dir) / safe_name(frame.manifest.frame_id);
    write_channel_pgm(dir / "height.pgm", encode_channel(r.images, r.images.height, kHeightScale), kHeightScale);
    write_channel_pgm(dir / "depth.pgm", encode_channel(r.images, r.images.depth, kDepthScale), kDepthScale);
    io::write_pgm8(dir / "p_o.pgm", encode_scores(r.images, r.scores));
    write_grid_pgm(dir / "grid.pgm", r.grid);
  });
  std::cout << "rendered " << manifests.size() << " frames to " << ro.out_dir << '\n';
  return kExitOk;
}

struct CoverageOptions {
  std::vector<std::string> manifests;
  std::string csv_path;
  double min_fraction = -1.0;
};

int coverage(const GlobalOptions& opts, const CoverageOptions& co) {
  const auto config = load_pipeline_config(opts);
  const auto manifests = manifest_list(co.manifests);
  std::vector<LoadedFrame> frames(manifests.size());
  parallel_for(manifests.size(), opts.jobs, [&](std::size_t i) {
    frames[i] = load_frame(manifests[i], config);
    if (!frames[i].has_annotations) throw IoError(manifests[i].string() + ": coverage needs annotations");
  });
  std::vector<CoverageFrame> input;
  for (const auto& f : frames) input.push_back({f.manifest.frame_id, &f.cloud, f.annotation_boxes()});
  const auto report = coverage_analysis(input, config.eval.coverage_margin);

  std::ostringstream csv;
  csv << "frame_id,object_id,returns\n";
  for (const auto& e : report.entries) csv << e.frame_id << ',' << e.object_id << ',' << e.returns << '\n';
  if (co.csv_path.empty()) {
    std::cout << csv.str();
  } else {
    io::write_text(co.csv_path, csv.str());
  }
  std::cout << "returns per object (" << report.entries.size() << " objects):\n";
  for (std::size_t b = 0; b < report.bin_labels.size(); ++b) {
    std::cout << "  " << report.bin_labels[b] << ": " << report.histogram[b] << '\n';
  }
  char line[128];
  std::snprintf(line, sizeof line, "fraction with more than 2 returns: %.6f\n", report.fraction_more_than_two);
  std::cout << line;
  if (co.min_fraction >= 0.0 && report.fraction_more_than_two < co.min_fraction) {
    std::cerr << "criteria failure: coverage fraction below " << co.min_fraction << '\n';
    return kExitCriteria;
  }
  return kExitOk;
}

}  // namespace

void add_render_command(CLI::App& app, GlobalOptions& opts, int& exit_code) {
  auto ro = std::make_shared<RenderOptions>();
  auto* cmd = app.add_subcommand("render", "Write height, depth, P_O and grid images for frames");
  cmd->add_option("manifests", ro->manifests, "Frame manifests or index files")->required();
  cmd->add_option("-o,--out", ro->out_dir, "Output directory")->required();
  cmd->callback([&opts, &exit_code, ro] { exit_code = render(opts, *ro); });
}

void add_coverage_command(CLI::App& app, GlobalOptions& opts, int& exit_code) {
  auto co = std::make_shared<CoverageOptions>();
  auto* cmd = app.add_subcommand("coverage", "Count LiDAR returns on annotated objects");
  cmd->add_option("manifests", co->manifests, "Frame manifests or index files")->required();
  cmd->add_option("-o,--out", co->csv_path, "Per-object CSV (default: stdout)");
  cmd->add_option("--min-fraction", co->min_fraction, "Exit with code 3 if fewer objects have more than 2 returns");
  cmd->callback([&opts, &exit_code, co] { exit_code = coverage(opts, *co); });
}

}  // namespace lmon::cli
