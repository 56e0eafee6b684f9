#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "lmon/types.hpp"

namespace lmon::test {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen_); }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

inline BBox3D box_at(double x, double y, double z, double l, double w, double h, double yaw = 0.0,
                     const std::string& id = "b") {
  BBox3D b;
  b.center = {x, y, z};
  b.size = {l, w, h};
  b.yaw = yaw;
  b.object_id = id;
  return b;
}

inline PointCloud cloud_of(std::vector<Point3> points, Point3 origin = {}) {
  PointCloud c;
  c.points = std::move(points);
  c.sensor_origin = origin;
  c.frame_id = "test";
  return c;
}

}  // namespace lmon::test
