#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lmon/aux_scores.hpp"
#include "lmon/obstacle_filter.hpp"
#include "lmon/projection.hpp"

namespace lmon {

/// One conjunctive keep case. Every present bound is a strict lower bound;
/// an absent bound does not constrain that score.
struct FusionCase {
  std::optional<double> min_po;
  std::optional<double> min_pn;
  std::optional<double> min_ps;

  [[nodiscard]] bool admits(double po, double pn, double ps) const;
};

/// Threshold form of the default rule.
struct FusionRule {
  double t_o_high = 0.9;
  double t_o_mid = 0.5;
  double t_s_mid = 0.7;
  double t_n_low = 0.2;
  double t_n_mid = 0.6;
  double t_s_high = 0.9;

  void validate() const;
};

/// Disjunction of keep cases, evaluated in order.
class FusionTable {
 public:
  FusionTable();  // the default rule
  explicit FusionTable(std::vector<FusionCase> cases);
  static FusionTable from_rule(const FusionRule& rule);

  /// Throws InputError if any score is outside [0,1].
  [[nodiscard]] bool keep(double po, double pn, double ps) const;
  [[nodiscard]] const std::vector<FusionCase>& cases() const { return cases_; }

 private:
  std::vector<FusionCase> cases_;
};

/// The default rule: keep iff P_O > 0.9, or P_O > 0.5 together with
/// (P_S > 0.7 and P_N > 0.2), P_N > 0.6, or P_S > 0.9.
bool fuse(double po, double pn, double ps);

struct ScoredPoint {
  Point3 point;
  std::uint32_t source_index = 0;
  int row = 0;
  int col = 0;
  double p_o = 0.0;
  double p_n = 0.0;
  double p_s = 0.0;
  bool keep = false;
};

/// Scores of every point that owns a pixel, in row-major pixel order.
struct ScoredCloud {
  std::vector<ScoredPoint> points;
  [[nodiscard]] std::size_t kept() const;
};

ScoredCloud score_points(const PointCloud& cloud, const RangeImages& images, const ScoreImage& scores,
                         const ScoreProvider& objectiveness, const ScoreProvider& semantic,
                         const FusionTable& table = {});

/// Source points of the kept pixels, in ascending source-index order.
PointCloud filter_cloud(const PointCloud& source, const ScoredCloud& scored);

}  // namespace lmon
