#include <fstream>
#include <iostream>
#include <sstream>

#include "common.hpp"
#include "json.hpp"
#include "lmon/evaluation.hpp"
#include "lmon/io.hpp"
#include "lmon/pipeline.hpp"
#include "worker_pool.hpp"

namespace lmon::cli {
namespace {

struct EvalOptions {
  std::vector<std::string> manifests;
  std::string mode = "combined";
  std::string csv_path;
  std::string json_path;
  long max_fn = -1;
};

struct RowSpec {
  std::string filters;
  bool gated = false;  // checked against --max-fn
};

std::string tau_label(double tau) {
  std::ostringstream os;
  os << "primary tau=" << tau;
  return os.str();
}

std::vector<RowSpec> row_specs(const std::string& mode, const PipelineConfig& config) {
  std::vector<RowSpec> rows;
  const bool grid = mode == "grid" || mode == "combined";
  const bool objects = mode == "objects" || mode == "combined";
  const bool monitor = mode == "combined";
  if (grid) {
    rows.push_back({"HC_sensitive"});
    rows.push_back({"HC"});
    rows.push_back({"HC+Objectiveness"});
    rows.push_back({"HC+Objectiveness+SemSeg", true});
  }
  if (objects) {
    for (double t : config.eval.tau_list) rows.push_back({tau_label(t), mode == "objects"});
  }
  if (monitor) {
    for (double t : config.eval.tau_list) rows.push_back({tau_label(t) + "+HC+Objectiveness+SemSeg", true});
  }
  return rows;
}

std::vector<EvalReport> eval_frame(const fs::path& manifest, const PipelineConfig& config, const std::string& mode) {
  const auto frame = load_frame(manifest, config);
  for (const auto& w : frame.warnings) warn(frame.manifest.frame_id + ": " + w);
  if (!frame.has_annotations) throw IoError(manifest.string() + ": evaluation needs annotations");
  const bool grid = mode == "grid" || mode == "combined";
  const bool objects = mode == "objects" || mode == "combined";
  if (objects && !frame.has_detections) throw IoError(manifest.string() + ": object-list evaluation needs detections");

  const auto truth = frame.evaluated_boxes(config.eval.min_visibility);
  const auto ignore = frame.ignored_boxes(config.eval.min_visibility);
  std::vector<EvalReport> out;

  std::optional<FrameGeometry> geometry;
  std::optional<OccupancyGrid> full;
  if (grid || mode == "combined") {
    geometry = frame_geometry(frame.cloud, config);
    full = fused_grid(frame.cloud, *geometry, *frame.objectiveness, *frame.semantic, config.fusion, config);
  }
  if (grid) {
    const ConstantProvider one(1.0);
    const ConstantProvider zero(0.0);
    const auto eval = [&](const ScoreProvider& pn, const ScoreProvider& ps) {
      const auto g = fused_grid(frame.cloud, *geometry, pn, ps, config.fusion, config);
      return grid_eval(g, truth, config.zone, config.cluster, ignore);
    };
    out.push_back(eval(one, one));
    out.push_back(eval(zero, zero));
    out.push_back(eval(*frame.objectiveness, zero));
    out.push_back(grid_eval(*full, truth, config.zone, config.cluster, ignore));
  }
  if (objects) {
    for (double t : config.eval.tau_list) {
      out.push_back(objectlist_eval(ObjectList::with_threshold(frame.detections.detections, t), truth, config.zone, ignore));
    }
  }
  if (mode == "combined") {
    for (double t : config.eval.tau_list) {
      const auto verdict = validate(ObjectList::with_threshold(frame.detections.detections, t), *full, config.zone, config.monitor);
      out.push_back(objectlist_eval(verdict.corrected, truth, config.zone, ignore));
    }
  }
  return out;
}

int run(const GlobalOptions& opts, const EvalOptions& eo) {
  const auto config = load_pipeline_config(opts);
  const auto manifests = manifest_list(eo.manifests);
  const auto specs = row_specs(eo.mode, config);

  std::vector<std::vector<EvalReport>> per_frame(manifests.size());
  parallel_for(manifests.size(), opts.jobs, [&](std::size_t i) { per_frame[i] = eval_frame(manifests[i], config, eo.mode); });

  std::vector<TableRow> rows;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    TableRow row{std::to_string(k + 1), specs[k].filters, {}};
    for (const auto& f : per_frame) row.report += f[k];
    row.report.finalize();
    rows.push_back(std::move(row));
  }

  std::ostringstream csv;
  write_table_csv(csv, rows);
  if (eo.csv_path.empty()) {
    std::cout << csv.str();
  } else {
    io::write_text(eo.csv_path, csv.str());
  }
  if (!eo.json_path.empty()) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows) {
      j.push_back({{"setup", r.setup},
                   {"filters", r.filters},
                   {"fn", r.report.fn},
                   {"fp", r.report.fp},
                   {"tp", r.report.tp},
                   {"precision", r.report.precision},
                   {"recall", r.report.recall}});
    }
    io::write_text(eo.json_path, j.dump(2) + "\n");
  }

  if (eo.max_fn >= 0) {
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (specs[k].gated && rows[k].report.fn > static_cast<std::size_t>(eo.max_fn)) {
        std::cerr << "criteria failure: setup " << rows[k].setup << " (" << rows[k].filters << ") has FN=" << rows[k].report.fn
                  << " > " << eo.max_fn << '\n';
        return kExitCriteria;
      }
    }
  }
  return kExitOk;
}

}  // namespace

void add_eval_command(CLI::App& app, GlobalOptions& opts, int& exit_code) {
  auto eo = std::make_shared<EvalOptions>();
  auto* cmd = app.add_subcommand("eval", "Evaluate filter, primary and monitored configurations against annotations");
  cmd->add_option("manifests", eo->manifests, "Frame manifests or index files")->required();
  cmd->add_option("-m,--mode", eo->mode, "grid: filter setups; objects: primary lists; combined: all setups")
      ->check(CLI::IsMember({"grid", "objects", "combined"}));
  cmd->add_option("-o,--out", eo->csv_path, "CSV output file (default: stdout)");
  cmd->add_option("--json", eo->json_path, "Also write the table as JSON");
  cmd->add_option("--max-fn", eo->max_fn, "Exit with code 3 if a gated setup exceeds this many FN");
  cmd->callback([&opts, &exit_code, eo] { exit_code = run(opts, *eo); });
}

}  // namespace lmon::cli
