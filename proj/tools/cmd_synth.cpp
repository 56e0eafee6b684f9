#include <algorithm>
#include <iostream>

#include "common.hpp"
#include "json.hpp"
#include "lmon/io.hpp"
#include "lmon/scene_synth.hpp"
#include "worker_pool.hpp"

namespace lmon::cli {
namespace {

struct SynthOptions {
  std::uint64_t seed = 1;
  std::string out_dir;
  std::size_t frames = 27;
  double drop_rate = 0.3;
  double spurious_rate = 0.1;
  std::vector<std::string> scenarios;
};

int run(const GlobalOptions& opts, const SynthOptions& so) {
  auto config = load_pipeline_config(opts);
  FaultInjection faults;
  faults.drop_rate = so.drop_rate;
  faults.spurious_rate = so.spurious_rate;
  if (!(so.drop_rate >= 0.0 && so.drop_rate <= 1.0) || !(so.spurious_rate >= 0.0 && so.spurious_rate <= 1.0)) {
    throw ConfigError("--drop-rate and --spurious-rate must be in [0,1]");
  }
  const auto names = scenario_suite(0);
  for (const auto& s : so.scenarios) {
    if (std::none_of(names.begin(), names.end(), [&](const ScenarioCase& c) { return c.name == s; })) {
      throw ConfigError("unknown scenario '" + s + "'");
    }
  }

  LidarConfig lidar;
  lidar.mount_height = config.mount_height;
  auto frames = generate_suite_frames(so.frames, so.seed, lidar);
  if (!so.scenarios.empty()) {
    std::erase_if(frames, [&](const SuiteFrame& f) {
      return std::find(so.scenarios.begin(), so.scenarios.end(), f.scenario.name) == so.scenarios.end();
    });
  }

  const fs::path out(so.out_dir);
  fs::create_directories(out);
  std::vector<std::string> index(frames.size());
  parallel_for(frames.size(), opts.jobs, [&](std::size_t i) {
    const auto& sf = frames[i];
    const auto& f = sf.frame;
    const std::string name = safe_name(f.cloud.frame_id);
    const fs::path dir = out / name;

    std::vector<Point3> sensor_points;
    sensor_points.reserve(f.cloud.size());
    for (const auto& p : f.cloud.points) sensor_points.push_back(p - f.cloud.sensor_origin);
    io::write_cloud_bin(dir / "cloud.bin", sensor_points);

    std::vector<io::BoxRecord> truth;
    for (std::size_t k = 0; k < f.annotations.detections.size(); ++k) {
      truth.push_back({f.annotations.detections[k].box, 1.0, f.visibility[k]});
    }
    io::write_boxes_json(dir / "annotations.json", truth);

    std::vector<io::BoxRecord> detections;
    for (const auto& d : inject_faults(f, config.zone, faults, sf.seed).detections) detections.push_back({d.box, d.confidence, {}});
    io::write_boxes_json(dir / "detections.json", detections);

    io::FrameManifest m;
    m.frame_id = f.cloud.frame_id;
    m.timestamp = f.cloud.timestamp;
    m.pointcloud_path = dir / "cloud.bin";
    m.annotations_path = dir / "annotations.json";
    m.detections_path = dir / "detections.json";
    m.sensor_origin = f.cloud.sensor_origin;
    io::write_manifest(dir / "manifest.json", m);
    index[i] = name + "/manifest.json";
  });

  io::write_text(out / "dataset.json", nlohmann::json(index).dump(2) + "\n");

  // No trained networks are available for synthetic data, so the written
  // config scores objectiveness and semantics from the annotation boxes.
  config.objectiveness = ScoreSource::kOracle;
  config.semantic = ScoreSource::kOracle;
  io::write_text(out / "config.json", config_to_json(config));

  nlohmann::json log;
  log["base_seed"] = so.seed;
  log["drop_rate"] = so.drop_rate;
  log["spurious_rate"] = so.spurious_rate;
  log["frames"] = nlohmann::json::array();
  for (const auto& sf : frames) {
    log["frames"].push_back({{"frame_id", sf.frame.cloud.frame_id},
                             {"scenario", sf.scenario.name},
                             {"expectation", to_string(sf.scenario.expectation)},
                             {"seed", sf.seed},
                             {"range_noise_sigma", sf.lidar.range_noise_sigma}});
  }
  io::write_text(out / "synth.json", log.dump(2) + "\n");
  std::cout << "wrote " << frames.size() << " frames to " << out.string() << " (base seed " << so.seed << ")\n";
  return kExitOk;
}

}  // namespace

void add_synth_command(CLI::App& app, GlobalOptions& opts, int& exit_code) {
  auto so = std::make_shared<SynthOptions>();
  auto* cmd = app.add_subcommand("synth", "Write the synthetic scenario suite as a dataset");
  cmd->add_option("-o,--out", so->out_dir, "Output directory")->required();
  cmd->add_option("-s,--seed", so->seed, "Base seed");
  cmd->add_option("-n,--frames", so->frames, "Number of suite frames (before scenario filtering)");
  cmd->add_option("--drop-rate", so->drop_rate, "Probability of deleting a true object from the primary list");
  cmd->add_option("--spurious-rate", so->spurious_rate, "Spurious primary boxes per true object");
  cmd->add_option("--scenario", so->scenarios, "Keep only these scenarios")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  cmd->callback([&opts, &exit_code, so] { exit_code = run(opts, *so); });
}

}  // namespace lmon::cli
