#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lmon/image.hpp"
#include "lmon/types.hpp"

namespace lmon {

/// Per-point auxiliary score source. Implementations are read-only after
/// construction and total over finite points; results lie in [0,1].
class ScoreProvider {
 public:
  virtual ~ScoreProvider() = default;
  [[nodiscard]] virtual double score(const Point3& p) const = 0;
  [[nodiscard]] virtual std::string name() const = 0;
};

/// Ego-centred objectiveness grid. Row index runs along x, column along y;
/// cell (r, c) covers x in [-extent + r*cell, -extent + (r+1)*cell).
struct ObjectivenessGrid {
  Image<float> values;
  double extent = 81.92;

  [[nodiscard]] double cell_size() const { return 2.0 * extent / values.rows(); }
  void validate() const;
};

/// Objectiveness at the cell containing (x, y); 0 outside the grid.
double p_n_lookup(const Point3& p, const ObjectivenessGrid& grid);

struct SemanticWeights {
  double center = 0.5;
  double edge = 0.1;        // each of the 4 side neighbours
  double diagonal = 0.025;  // each of the 4 diagonal neighbours

  [[nodiscard]] double max_score() const { return center + 4.0 * edge + 4.0 * diagonal; }
};

struct SemanticImage {
  Image<std::uint8_t> labels;  // rows = image height
  std::set<int> relevant_classes;
  CameraCalibration calib;

  void validate() const;
  [[nodiscard]] bool relevant(int row, int col) const;
};

/// Projects `p` into the label image and scores the 3x3 neighbourhood.
/// Points behind the camera or off-image score 0; off-image neighbours
/// contribute 0.
double p_s_project(const Point3& p, const SemanticImage& image, const SemanticWeights& weights = {});

/// Test substitute for the trained networks: (1, 1) inside any annotation
/// box grown by `margin`, else (0, 0).
std::pair<double, double> oracle_scores(const Point3& p, std::span<const BBox3D> annotations, double margin = 0.1);

class ConstantProvider final : public ScoreProvider {
 public:
  explicit ConstantProvider(double value);
  [[nodiscard]] double score(const Point3&) const override { return value_; }
  [[nodiscard]] std::string name() const override;

 private:
  double value_;
};

class ObjectivenessProvider final : public ScoreProvider {
 public:
  explicit ObjectivenessProvider(ObjectivenessGrid grid);
  [[nodiscard]] double score(const Point3& p) const override { return p_n_lookup(p, grid_); }
  [[nodiscard]] std::string name() const override { return "objectiveness"; }

 private:
  ObjectivenessGrid grid_;
};

class SemanticProvider final : public ScoreProvider {
 public:
  explicit SemanticProvider(SemanticImage image, SemanticWeights weights = {});
  [[nodiscard]] double score(const Point3& p) const override { return p_s_project(p, image_, weights_); }
  [[nodiscard]] std::string name() const override { return "semantic"; }

 private:
  SemanticImage image_;
  SemanticWeights weights_;
};

class OracleProvider final : public ScoreProvider {
 public:
  OracleProvider(std::vector<BBox3D> annotations, double margin);
  [[nodiscard]] double score(const Point3& p) const override;
  [[nodiscard]] std::string name() const override { return "oracle"; }

 private:
  std::vector<BBox3D> annotations_;
  double margin_;
};

}  // namespace lmon
