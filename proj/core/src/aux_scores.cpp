#include "lmon/aux_scores.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lmon/geometry.hpp"

namespace lmon {

void ObjectivenessGrid::validate() const {
  if (values.rows() <= 0 || values.cols() <= 0) throw ConfigError("objectiveness grid is empty");
  if (values.rows() != values.cols()) throw ConfigError("objectiveness grid must be square");
  if (!(extent > 0.0)) throw ConfigError("objectiveness extent must be > 0");
  for (float v : values.data()) {
    if (!(v >= 0.0f && v <= 1.0f)) throw InputError("objectiveness value outside [0,1]");
  }
}

double p_n_lookup(const Point3& p, const ObjectivenessGrid& grid) {
  const double cell = grid.cell_size();
  const double fr = std::floor((p.x + grid.extent) / cell);
  const double fc = std::floor((p.y + grid.extent) / cell);
  if (!(fr >= 0.0 && fc >= 0.0 && fr < grid.values.rows() && fc < grid.values.cols())) return 0.0;
  return grid.values(static_cast<int>(fr), static_cast<int>(fc));
}

void SemanticImage::validate() const {
  calib.validate();
  if (relevant_classes.empty()) throw ConfigError("semantic image needs at least one relevant class");
  if (labels.rows() != calib.height || labels.cols() != calib.width) {
    throw InputError("semantic label image size does not match the calibration");
  }
}

bool SemanticImage::relevant(int row, int col) const {
  if (row < 0 || col < 0 || row >= labels.rows() || col >= labels.cols()) return false;
  return relevant_classes.contains(labels(row, col));
}

double p_s_project(const Point3& p, const SemanticImage& image, const SemanticWeights& weights) {
  const Point3 cam = image.calib.to_camera(p);
  if (!(cam.z > 0.0)) return 0.0;
  const double u = image.calib.fx * cam.x / cam.z + image.calib.cx;
  const double v = image.calib.fy * cam.y / cam.z + image.calib.cy;
  if (!(u >= 0.0 && v >= 0.0 && u < image.labels.cols() && v < image.labels.rows())) return 0.0;
  const int i = static_cast<int>(v);
  const int j = static_cast<int>(u);
  const auto ind = [&](int di, int dj) { return image.relevant(i + di, j + dj) ? 1.0 : 0.0; };
  const double score = weights.center * ind(0, 0) +
                       weights.edge * (ind(-1, 0) + ind(1, 0) + ind(0, -1) + ind(0, 1)) +
                       weights.diagonal * (ind(-1, -1) + ind(-1, 1) + ind(1, -1) + ind(1, 1));
  return std::clamp(score, 0.0, 1.0);
}

std::pair<double, double> oracle_scores(const Point3& p, std::span<const BBox3D> annotations, double margin) {
  for (const auto& box : annotations) {
    if (point_in_box(p, box, margin)) return {1.0, 1.0};
  }
  return {0.0, 0.0};
}

ConstantProvider::ConstantProvider(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) throw ConfigError("constant provider value must be in [0,1]");
}

std::string ConstantProvider::name() const {
  std::ostringstream os;
  os << "constant(" << value_ << ")";
  return os.str();
}

ObjectivenessProvider::ObjectivenessProvider(ObjectivenessGrid grid) : grid_(std::move(grid)) { grid_.validate(); }

SemanticProvider::SemanticProvider(SemanticImage image, SemanticWeights weights)
    : image_(std::move(image)), weights_(weights) {
  image_.validate();
}

OracleProvider::OracleProvider(std::vector<BBox3D> annotations, double margin)
    : annotations_(std::move(annotations)), margin_(margin) {
  if (!(margin >= 0.0)) throw ConfigError("oracle margin must be >= 0");
}

double OracleProvider::score(const Point3& p) const { return oracle_scores(p, annotations_, margin_).first; }

}  // namespace lmon
