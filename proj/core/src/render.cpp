#include "lmon/render.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "lmon/io.hpp"

namespace lmon {
namespace {

using nlohmann::json;

json box_json(const Detection& d) {
  const auto& b = d.box;
  return {{"object_id", b.object_id},
          {"class_label", b.class_label},
          {"center", {b.center.x, b.center.y, b.center.z}},
          {"size", {b.size.length, b.size.width, b.size.height}},
          {"yaw", b.yaw},
          {"confidence", d.confidence}};
}

json ids(const std::vector<Detection>& ds) {
  json out = json::array();
  for (const auto& d : ds) out.push_back(d.box.object_id);
  return out;
}

}  // namespace

Image<std::uint16_t> encode_channel(const RangeImages& images, const Image<double>& channel, PixelScale scale) {
  Image<std::uint16_t> out(images.rows(), images.cols(), 0);
  for (int r = 0; r < images.rows(); ++r) {
    for (int c = 0; c < images.cols(); ++c) {
      if (images.empty(r, c)) continue;
      const double v = std::round((channel(r, c) - scale.offset) / scale.scale);
      out(images.rows() - 1 - r, c) = static_cast<std::uint16_t>(std::clamp(v, 1.0, 65535.0));
    }
  }
  return out;
}

Image<std::uint8_t> encode_scores(const RangeImages& images, const ScoreImage& scores) {
  Image<std::uint8_t> out(images.rows(), images.cols(), 0);
  for (int r = 0; r < images.rows(); ++r) {
    for (int c = 0; c < images.cols(); ++c) {
      if (images.empty(r, c)) continue;
      out(images.rows() - 1 - r, c) = static_cast<std::uint8_t>(std::lround(255.0 * std::clamp(scores.p_o(r, c), 0.0, 1.0)));
    }
  }
  return out;
}

Image<std::uint8_t> encode_grid(const OccupancyGrid& grid) {
  const int nx = grid.spec.cols_x();
  const int ny = grid.spec.cols_y();
  Image<std::uint8_t> out(nx, ny, 0);
  for (int ix = 0; ix < nx; ++ix) {
    for (int iy = 0; iy < ny; ++iy) {
      if (grid.is_occupied({ix, iy})) out(nx - 1 - ix, ny - 1 - iy) = 255;
    }
  }
  return out;
}

void write_channel_pgm(const std::filesystem::path& path, const Image<std::uint16_t>& image, PixelScale scale) {
  io::write_pgm16(path, image);
  const json meta = {{"scale", scale.scale}, {"offset", scale.offset}, {"empty_value", 0}, {"row_order", "top_is_highest_elevation"}};
  io::write_text(io::sidecar_path(path), meta.dump(2) + "\n");
}

void write_grid_pgm(const std::filesystem::path& path, const OccupancyGrid& grid) {
  io::write_pgm8(path, encode_grid(grid));
  const json meta = {{"cell_size", grid.spec.cell_size},
                     {"extent", {{"forward", grid.spec.forward}, {"backward", grid.spec.backward}, {"lateral", grid.spec.lateral}}},
                     {"origin", {grid.spec.origin_x(), grid.spec.origin_y()}},
                     {"layout", "top row = max x, left column = max y"}};
  io::write_text(io::sidecar_path(path), meta.dump(2) + "\n");
}

std::string verdict_json(const std::string& frame_id, const MonitorVerdict& v) {
  json j;
  j["frame_id"] = frame_id;
  j["confirmed"] = ids(v.confirmed);
  j["unconfirmed"] = ids(v.unconfirmed);
  j["outside_zone"] = ids(v.outside_zone);
  json missed = json::array();
  for (const auto& m : v.missed_regions) {
    missed.push_back({{"object_id", m.box.object_id},
                      {"bounds", {m.cluster.min.x, m.cluster.min.y, m.cluster.max.x, m.cluster.max.y}},
                      {"cell_count", m.cluster.cells.size()}});
  }
  j["missed_regions"] = missed;
  json corrected = json::array();
  for (const auto& d : v.corrected.detections) corrected.push_back(box_json(d));
  j["corrected"] = corrected;
  return j.dump(2) + "\n";
}

std::string grid_summary_json(const std::string& frame_id, const OccupancyGrid& grid, std::size_t kept_points,
                              std::size_t input_points) {
  const json j = {{"frame_id", frame_id},
                  {"input_points", input_points},
                  {"kept_points", kept_points},
                  {"occupied_cells", grid.occupied_cells().size()}};
  return j.dump(2) + "\n";
}

}  // namespace lmon
