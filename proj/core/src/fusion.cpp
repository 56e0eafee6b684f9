#include "lmon/fusion.hpp"

#include <algorithm>

namespace lmon {
namespace {

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

bool above(const std::optional<double>& bound, double v) { return !bound || v > *bound; }

}  // namespace

bool FusionCase::admits(double po, double pn, double ps) const {
  return above(min_po, po) && above(min_pn, pn) && above(min_ps, ps);
}

void FusionRule::validate() const {
  for (double t : {t_o_high, t_o_mid, t_s_mid, t_n_low, t_n_mid, t_s_high}) {
    if (!in_unit(t)) throw ConfigError("fusion thresholds must be in [0,1]");
  }
  if (!(t_o_mid < t_o_high)) throw ConfigError("fusion rule needs t_o_mid < t_o_high");
}

FusionTable::FusionTable() : FusionTable(from_rule(FusionRule{})) {}

FusionTable::FusionTable(std::vector<FusionCase> cases) : cases_(std::move(cases)) {}

FusionTable FusionTable::from_rule(const FusionRule& r) {
  r.validate();
  return FusionTable({
      FusionCase{r.t_o_high, std::nullopt, std::nullopt},
      FusionCase{r.t_o_mid, r.t_n_low, r.t_s_mid},
      FusionCase{r.t_o_mid, r.t_n_mid, std::nullopt},
      FusionCase{r.t_o_mid, std::nullopt, r.t_s_high},
  });
}

bool FusionTable::keep(double po, double pn, double ps) const {
  if (!in_unit(po) || !in_unit(pn) || !in_unit(ps)) throw InputError("fusion input score outside [0,1]");
  return std::any_of(cases_.begin(), cases_.end(), [&](const FusionCase& c) { return c.admits(po, pn, ps); });
}

bool fuse(double po, double pn, double ps) {
  static const FusionTable table;
  return table.keep(po, pn, ps);
}

std::size_t ScoredCloud::kept() const {
  return static_cast<std::size_t>(std::count_if(points.begin(), points.end(), [](const ScoredPoint& p) { return p.keep; }));
}

ScoredCloud score_points(const PointCloud& cloud, const RangeImages& images, const ScoreImage& scores,
                         const ScoreProvider& objectiveness, const ScoreProvider& semantic,
                         const FusionTable& table) {
  if (scores.p_o.rows() != images.rows() || scores.p_o.cols() != images.cols()) {
    throw InputError("score image does not match the range images");
  }
  ScoredCloud out;
  out.points.reserve(images.filled());
  for (int r = 0; r < images.rows(); ++r) {
    for (int c = 0; c < images.cols(); ++c) {
      if (images.empty(r, c)) continue;
      ScoredPoint sp;
      sp.source_index = images.source(r, c);
      sp.point = cloud.points.at(sp.source_index);
      sp.row = r;
      sp.col = c;
      sp.p_o = scores.p_o(r, c);
      sp.p_n = objectiveness.score(sp.point);
      sp.p_s = semantic.score(sp.point);
      sp.keep = table.keep(sp.p_o, sp.p_n, sp.p_s);
      out.points.push_back(sp);
    }
  }
  return out;
}

PointCloud filter_cloud(const PointCloud& source, const ScoredCloud& scored) {
  std::vector<std::uint32_t> kept;
  for (const auto& p : scored.points) {
    if (p.keep) kept.push_back(p.source_index);
  }
  std::sort(kept.begin(), kept.end());
  PointCloud out;
  out.frame_id = source.frame_id;
  out.sensor_origin = source.sensor_origin;
  out.timestamp = source.timestamp;
  out.points.reserve(kept.size());
  for (auto i : kept) out.points.push_back(source.points.at(i));
  return out;
}

}  // namespace lmon
