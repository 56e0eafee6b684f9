#include <cstdio>
#include <iostream>
#include <mutex>

#include "common.hpp"
#include "lmon/io.hpp"

namespace lmon::cli {

PipelineConfig load_pipeline_config(const GlobalOptions& opts) {
  if (opts.config_path.empty()) return default_config(opts.overrides);
  return load_config(opts.config_path, opts.overrides);
}

std::vector<fs::path> manifest_list(const std::vector<std::string>& args) {
  std::vector<fs::path> inputs(args.begin(), args.end());
  auto out = io::expand_manifests(inputs);
  if (out.empty()) throw IoError("no frame manifests given");
  return out;
}

std::string safe_name(const std::string& frame_id) {
  std::string s = frame_id;
  for (char& c : s) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.';
    if (!ok) c = '_';
  }
  return s.empty() ? "frame" : s;
}

void warn(const std::string& message) {
  static std::mutex mu;
  const std::lock_guard lock(mu);
  std::cerr << "warning: " << message << '\n';
}

}  // namespace lmon::cli

int main(int argc, char** argv) {
  using namespace lmon::cli;
  CLI::App app{"LiDAR perception monitor: obstacle filtering, occupancy validation and evaluation"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOptions opts;
  app.add_option("-c,--config", opts.config_path, "JSON pipeline config")->check(CLI::ExistingFile);
  app.add_option("--set", opts.overrides, "Override a config value, e.g. --set obstacle.alpha_road_deg=3")
      ->type_name("KEY=VALUE")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_option("-j,--jobs", opts.jobs, "Worker threads")->check(CLI::Range(1u, 256u));
  app.add_flag("--strict", opts.strict, "Abort the batch on the first failing frame");

  int exit_code = kExitOk;
  add_run_command(app, opts, exit_code);
  add_eval_command(app, opts, exit_code);
  add_synth_command(app, opts, exit_code);
  add_render_command(app, opts, exit_code);
  add_coverage_command(app, opts, exit_code);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  } catch (const lmon::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const lmon::IoError& e) {
    std::cerr << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const lmon::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return exit_code;
}
