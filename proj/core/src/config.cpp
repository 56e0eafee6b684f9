#include "lmon/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace lmon {
namespace {

using nlohmann::json;

/// Reads keys out of one JSON object and rejects any key left unread.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + " must be an object");
  }

  ~Section() = default;
  Section(const Section&) = delete;
  Section& operator=(const Section&) = delete;

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError(where(key) + " has the wrong type");
    }
  }

  void get_deg(const char* key, double& radians) {
    double deg = rad_to_deg(radians);
    const bool present = j_.contains(key);
    get(key, deg);
    if (present) radians = deg_to_rad(deg);
  }

  [[nodiscard]] bool has(const char* key) const { return j_.contains(key); }
  void mark(const char* key) { seen_.insert(key); }
  const json& raw(const char* key) {
    seen_.insert(key);
    return j_.at(key);
  }

  Section sub(const char* key) {
    seen_.insert(key);
    static const json kEmpty = json::object();
    return {j_.contains(key) ? j_.at(key) : kEmpty, where(key)};
  }

  void finish() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) throw ConfigError("unknown config key " + where(k.c_str()));
    }
  }

 private:
  [[nodiscard]] std::string where(const char* key = nullptr) const {
    if (!key) return path_.empty() ? std::string("config") : path_;
    return path_.empty() ? std::string(key) : path_ + "." + key;
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like key=value: " + assignment);
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::exception&) {
    value = text;
  }
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (part.empty()) throw ConfigError("malformed override key " + key);
    if (!node->is_object()) throw ConfigError("override " + key + " descends into a non-object");
    if (dot == std::string::npos) {
      (*node)[part] = value;
      return;
    }
    node = &(*node)[part];
    if (node->is_null()) *node = json::object();
    start = dot + 1;
  }
}

std::optional<double> bound_from(Section& s, const char* key) {
  if (!s.has(key)) {
    s.mark(key);
    return std::nullopt;
  }
  const json& v = s.raw(key);
  if (v.is_null()) return std::nullopt;
  if (!v.is_number()) throw ConfigError(std::string("fusion rule bound ") + key + " must be a number or null");
  const double d = v.get<double>();
  if (!(d >= 0.0 && d <= 1.0)) throw ConfigError(std::string("fusion rule bound ") + key + " must be in [0,1]");
  return d;
}

FusionTable parse_fusion(Section s) {
  if (s.has("rules")) {
    for (const char* k : {"t_o_high", "t_o_mid", "t_s_mid", "t_n_low", "t_n_mid", "t_s_high"}) {
      if (s.has(k)) throw ConfigError("fusion: give either rules or thresholds, not both");
    }
    const json& rules = s.raw("rules");
    if (!rules.is_array() || rules.empty()) throw ConfigError("fusion.rules must be a non-empty array");
    std::vector<FusionCase> cases;
    for (std::size_t i = 0; i < rules.size(); ++i) {
      Section r(rules[i], "fusion.rules[" + std::to_string(i) + "]");
      FusionCase c;
      c.min_po = bound_from(r, "min_po");
      c.min_pn = bound_from(r, "min_pn");
      c.min_ps = bound_from(r, "min_ps");
      r.finish();
      cases.push_back(c);
    }
    s.finish();
    return FusionTable(std::move(cases));
  }
  FusionRule rule;
  s.get("t_o_high", rule.t_o_high);
  s.get("t_o_mid", rule.t_o_mid);
  s.get("t_s_mid", rule.t_s_mid);
  s.get("t_n_low", rule.t_n_low);
  s.get("t_n_mid", rule.t_n_mid);
  s.get("t_s_high", rule.t_s_high);
  s.finish();
  return FusionTable::from_rule(rule);
}

Polygon polygon_from(const json& j) {
  if (!j.is_array()) throw ConfigError("zone.road_mask entries must be arrays of [x, y]");
  Polygon poly;
  for (const auto& v : j) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      throw ConfigError("zone.road_mask vertices must be [x, y]");
    }
    poly.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  return poly;
}

PipelineConfig parse_doc(const json& doc) {
  PipelineConfig c;
  Section root(doc, "");

  {
    auto s = root.sub("projection");
    s.get("num_rows", c.projection.num_rows);
    s.get("num_cols", c.projection.num_cols);
    s.get_deg("vertical_min_deg", c.projection.vertical_min);
    s.get_deg("vertical_max_deg", c.projection.vertical_max);
    s.get_deg("azimuth_min_deg", c.projection.azimuth_min);
    s.get_deg("azimuth_max_deg", c.projection.azimuth_max);
    std::vector<double> layers;
    s.get("layer_angles_deg", layers);
    c.projection.layer_angles.clear();
    for (double d : layers) c.projection.layer_angles.push_back(deg_to_rad(d));
    s.finish();
  }
  {
    auto s = root.sub("obstacle");
    s.get_deg("alpha_road_deg", c.obstacle.alpha_road);
    s.get("h_c", c.obstacle.h_c);
    s.get("h_t", c.obstacle.h_t);
    s.get_deg("theta_full_deg", c.obstacle.theta_full);
    s.get("h_seed_max", c.obstacle.h_seed_max);
    s.get("min_baseline", c.obstacle.min_baseline);
    s.get("height_tolerance", c.obstacle.height_tolerance);
    s.finish();
  }
  c.fusion = parse_fusion(root.sub("fusion"));
  {
    auto s = root.sub("grid");
    s.get("cell_size", c.grid.cell_size);
    s.get("forward", c.grid.forward);
    s.get("backward", c.grid.backward);
    s.get("lateral", c.grid.lateral);
    s.get("min_points", c.min_points);
    s.finish();
  }
  {
    auto s = root.sub("cluster");
    if (s.has("eps") && !s.raw("eps").is_null()) {
      double eps = 0.0;
      s.get("eps", eps);
      c.cluster.eps = eps;
    } else {
      s.mark("eps");
    }
    s.get("min_pts", c.cluster.min_pts);
    s.finish();
  }
  {
    auto s = root.sub("zone");
    s.get("forward_extent", c.zone.forward_extent);
    s.get("lateral_extent", c.zone.lateral_extent);
    if (s.has("road_mask")) {
      const json& mask = s.raw("road_mask");
      if (!mask.is_array()) throw ConfigError("zone.road_mask must be an array of polygons");
      for (const auto& poly : mask) c.zone.road_mask.push_back(polygon_from(poly));
    }
    s.finish();
  }
  {
    auto s = root.sub("providers");
    std::string pn = to_string(c.objectiveness);
    std::string ps = to_string(c.semantic);
    s.get("objectiveness", pn);
    s.get("semantic", ps);
    c.objectiveness = score_source_from(pn);
    c.semantic = score_source_from(ps);
    s.get("oracle_margin", c.oracle_margin);
    auto w = s.sub("semantic_weights");
    w.get("center", c.semantic_weights.center);
    w.get("edge", c.semantic_weights.edge);
    w.get("diagonal", c.semantic_weights.diagonal);
    w.finish();
    s.finish();
  }
  {
    auto s = root.sub("sensor");
    s.get("mount_height", c.mount_height);
    s.finish();
  }
  {
    auto s = root.sub("monitor");
    s.get("drop_unconfirmed", c.monitor.drop_unconfirmed);
    s.get("box_z_min", c.monitor.box_z_min);
    s.get("box_z_max", c.monitor.box_z_max);
    s.finish();
  }
  {
    auto s = root.sub("eval");
    s.get("tau_list", c.eval.tau_list);
    s.get("min_visibility", c.eval.min_visibility);
    s.get("coverage_margin", c.eval.coverage_margin);
    s.finish();
  }
  root.finish();
  c.monitor.cluster = c.cluster;
  c.validate();
  return c;
}

json bound_json(const std::optional<double>& b) { return b ? json(*b) : json(nullptr); }

}  // namespace

std::string to_string(ScoreSource s) {
  switch (s) {
    case ScoreSource::kFile:
      return "file";
    case ScoreSource::kOracle:
      return "oracle";
    case ScoreSource::kZero:
      return "zero";
    case ScoreSource::kOne:
      return "one";
  }
  return "file";
}

ScoreSource score_source_from(const std::string& s) {
  if (s == "file") return ScoreSource::kFile;
  if (s == "oracle") return ScoreSource::kOracle;
  if (s == "zero") return ScoreSource::kZero;
  if (s == "one") return ScoreSource::kOne;
  throw ConfigError("unknown score source '" + s + "' (expected file, oracle, zero or one)");
}

void PipelineConfig::validate() const {
  projection.validate();
  obstacle.validate();
  grid.validate();
  if (min_points < 1) throw ConfigError("grid.min_points must be at least 1");
  cluster.validate();
  zone.validate();
  if (!grid.covers(zone)) throw ConfigError("occupancy grid does not cover the safety zone");
  if (!(oracle_margin >= 0.0)) throw ConfigError("providers.oracle_margin must be non-negative");
  for (double w : {semantic_weights.center, semantic_weights.edge, semantic_weights.diagonal}) {
    if (!(w >= 0.0)) throw ConfigError("semantic weights must be non-negative");
  }
  if (!(semantic_weights.max_score() > 0.0)) throw ConfigError("semantic weights must not all be zero");
  if (!(mount_height >= 0.0)) throw ConfigError("sensor.mount_height must be non-negative");
  if (!(monitor.box_z_min < monitor.box_z_max)) throw ConfigError("monitor box band must satisfy min < max");
  for (double t : eval.tau_list) {
    if (!(t >= 0.0 && t <= 1.0)) throw ConfigError("eval.tau_list entries must be in [0,1]");
  }
  if (!(eval.coverage_margin >= 0.0)) throw ConfigError("eval.coverage_margin must be non-negative");
}

PipelineConfig parse_config(const std::string& json_text, const std::vector<std::string>& overrides) {
  json doc;
  try {
    doc = json_text.empty() ? json::object() : json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed config JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& o : overrides) apply_override(doc, o);
  return parse_doc(doc);
}

PipelineConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), overrides);
}

PipelineConfig default_config(const std::vector<std::string>& overrides) { return parse_config("{}", overrides); }

std::string config_to_json(const PipelineConfig& c) {
  json j;
  json layers = json::array();
  for (double a : c.projection.layer_angles) layers.push_back(rad_to_deg(a));
  j["projection"] = {{"num_rows", c.projection.num_rows},
                     {"num_cols", c.projection.num_cols},
                     {"vertical_min_deg", rad_to_deg(c.projection.vertical_min)},
                     {"vertical_max_deg", rad_to_deg(c.projection.vertical_max)},
                     {"azimuth_min_deg", rad_to_deg(c.projection.azimuth_min)},
                     {"azimuth_max_deg", rad_to_deg(c.projection.azimuth_max)},
                     {"layer_angles_deg", layers}};
  j["obstacle"] = {{"alpha_road_deg", rad_to_deg(c.obstacle.alpha_road)},
                   {"h_c", c.obstacle.h_c},
                   {"h_t", c.obstacle.h_t},
                   {"theta_full_deg", rad_to_deg(c.obstacle.theta_full)},
                   {"h_seed_max", c.obstacle.h_seed_max},
                   {"min_baseline", c.obstacle.min_baseline},
                   {"height_tolerance", c.obstacle.height_tolerance}};
  json rules = json::array();
  for (const auto& fc : c.fusion.cases()) {
    rules.push_back({{"min_po", bound_json(fc.min_po)}, {"min_pn", bound_json(fc.min_pn)}, {"min_ps", bound_json(fc.min_ps)}});
  }
  j["fusion"] = {{"rules", rules}};
  j["grid"] = {{"cell_size", c.grid.cell_size},
               {"forward", c.grid.forward},
               {"backward", c.grid.backward},
               {"lateral", c.grid.lateral},
               {"min_points", c.min_points}};
  j["cluster"] = {{"eps", bound_json(c.cluster.eps)}, {"min_pts", c.cluster.min_pts}};
  json mask = json::array();
  for (const auto& poly : c.zone.road_mask) {
    json p = json::array();
    for (const auto& v : poly) p.push_back({v.x, v.y});
    mask.push_back(p);
  }
  j["zone"] = {{"forward_extent", c.zone.forward_extent}, {"lateral_extent", c.zone.lateral_extent}, {"road_mask", mask}};
  j["providers"] = {{"objectiveness", to_string(c.objectiveness)},
                    {"semantic", to_string(c.semantic)},
                    {"oracle_margin", c.oracle_margin},
                    {"semantic_weights",
                     {{"center", c.semantic_weights.center},
                      {"edge", c.semantic_weights.edge},
                      {"diagonal", c.semantic_weights.diagonal}}}};
  j["sensor"] = {{"mount_height", c.mount_height}};
  j["monitor"] = {{"drop_unconfirmed", c.monitor.drop_unconfirmed},
                  {"box_z_min", c.monitor.box_z_min},
                  {"box_z_max", c.monitor.box_z_max}};
  j["eval"] = {{"tau_list", c.eval.tau_list},
               {"min_visibility", c.eval.min_visibility},
               {"coverage_margin", c.eval.coverage_margin}};
  return j.dump(2) + "\n";
}

}  // namespace lmon
