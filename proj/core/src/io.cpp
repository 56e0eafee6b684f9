#include "lmon/io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace lmon::io {
namespace {

using nlohmann::json;

static_assert(sizeof(float) == 4);

float load_le_float(const unsigned char* b) {
  std::uint32_t u = static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
                    (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
  return std::bit_cast<float>(u);
}

void store_le_float(float f, unsigned char* b) {
  const auto u = std::bit_cast<std::uint32_t>(f);
  b[0] = static_cast<unsigned char>(u & 0xff);
  b[1] = static_cast<unsigned char>((u >> 8) & 0xff);
  b[2] = static_cast<unsigned char>((u >> 16) & 0xff);
  b[3] = static_cast<unsigned char>((u >> 24) & 0xff);
}

std::vector<unsigned char> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return data;
}

void write_bytes(const fs::path& path, const void* data, std::size_t n) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  if (!out) throw IoError("write failed for " + path.string());
}

json parse_json_file(const fs::path& path) {
  const std::string text = read_text(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw IoError("malformed JSON in " + path.string() + ": " + e.what());
  }
}

Point3 point_from(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw IoError(what + " must be a 3-element array");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

json point_to(const Point3& p) { return json::array({p.x, p.y, p.z}); }

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::string relative_to(const fs::path& base, const fs::path& p) {
  std::error_code ec;
  const auto rel = fs::relative(p, base, ec);
  return ec || rel.empty() ? p.generic_string() : rel.generic_string();
}

struct PgmHeader {
  int width = 0;
  int height = 0;
  int maxval = 0;
  std::size_t offset = 0;
};

PgmHeader parse_pgm_header(const std::vector<unsigned char>& data, const fs::path& path) {
  PgmHeader h;
  std::size_t pos = 0;
  const auto next_token = [&]() {
    while (pos < data.size()) {
      if (data[pos] == '#') {
        while (pos < data.size() && data[pos] != '\n') ++pos;
      } else if (std::isspace(data[pos])) {
        ++pos;
      } else {
        break;
      }
    }
    std::string tok;
    while (pos < data.size() && !std::isspace(data[pos])) tok.push_back(static_cast<char>(data[pos++]));
    return tok;
  };
  if (next_token() != "P5") throw IoError(path.string() + " is not a binary PGM");
  try {
    h.width = std::stoi(next_token());
    h.height = std::stoi(next_token());
    h.maxval = std::stoi(next_token());
  } catch (const std::exception&) {
    throw IoError("corrupt PGM header in " + path.string());
  }
  ++pos;  // single whitespace before the raster
  h.offset = pos;
  if (h.width <= 0 || h.height <= 0 || h.maxval <= 0 || h.maxval > 65535) {
    throw IoError("invalid PGM dimensions in " + path.string());
  }
  return h;
}

std::string pgm_header(int width, int height, int maxval) {
  std::ostringstream os;
  os << "P5\n" << width << ' ' << height << '\n' << maxval << '\n';
  return os.str();
}

}  // namespace

fs::path sidecar_path(const fs::path& path) { return fs::path(path.string() + ".json"); }

void write_text(const fs::path& path, const std::string& text) { write_bytes(path, text.data(), text.size()); }

std::string read_text(const fs::path& path) {
  const auto bytes = read_bytes(path);
  return {bytes.begin(), bytes.end()};
}

RawCloud read_cloud_bin(const fs::path& path) {
  const auto bytes = read_bytes(path);
  if (bytes.size() % 16 != 0) {
    throw IoError(path.string() + ": size " + std::to_string(bytes.size()) + " is not a multiple of 16 bytes");
  }
  RawCloud out;
  const std::size_t n = bytes.size() / 16;
  out.points.reserve(n);
  out.intensity.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned char* rec = bytes.data() + 16 * i;
    const Point3 p{load_le_float(rec), load_le_float(rec + 4), load_le_float(rec + 8)};
    if (!p.finite()) {
      ++out.dropped_non_finite;
      continue;
    }
    out.points.push_back(p);
    out.intensity.push_back(load_le_float(rec + 12));
  }
  return out;
}

void write_cloud_bin(const fs::path& path, const std::vector<Point3>& points, const std::vector<float>& intensity) {
  std::vector<unsigned char> buf(points.size() * 16);
  for (std::size_t i = 0; i < points.size(); ++i) {
    unsigned char* rec = buf.data() + 16 * i;
    store_le_float(static_cast<float>(points[i].x), rec);
    store_le_float(static_cast<float>(points[i].y), rec + 4);
    store_le_float(static_cast<float>(points[i].z), rec + 8);
    store_le_float(i < intensity.size() ? intensity[i] : 0.0f, rec + 12);
  }
  write_bytes(path, buf.data(), buf.size());
}

std::vector<BoxRecord> read_boxes_json(const fs::path& path) {
  const json doc = parse_json_file(path);
  if (!doc.is_array()) throw IoError(path.string() + ": expected a JSON array of boxes");
  std::vector<BoxRecord> out;
  try {
    for (const auto& j : doc) {
      BoxRecord r;
      r.box.center = point_from(j.at("center"), "box center");
      const Point3 size = point_from(j.at("size"), "box size");
      r.box.size = {size.x, size.y, size.z};
      r.box.yaw = j.value("yaw", 0.0);
      r.box.class_label = j.value("class_label", std::string("unknown"));
      r.box.object_id = j.value("object_id", std::string("obj_") + std::to_string(out.size()));
      r.confidence = j.value("confidence", 1.0);
      if (j.contains("visibility")) r.visibility = j.at("visibility").get<std::size_t>();
      r.box.validate();
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  } catch (const ConfigError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  return out;
}

void write_boxes_json(const fs::path& path, const std::vector<BoxRecord>& boxes) {
  json doc = json::array();
  for (const auto& r : boxes) {
    json j;
    j["center"] = point_to(r.box.center);
    j["size"] = json::array({r.box.size.length, r.box.size.width, r.box.size.height});
    j["yaw"] = r.box.yaw;
    j["class_label"] = r.box.class_label;
    j["object_id"] = r.box.object_id;
    j["confidence"] = r.confidence;
    if (r.visibility) j["visibility"] = *r.visibility;
    doc.push_back(std::move(j));
  }
  write_text(path, doc.dump(2) + "\n");
}

CameraCalibration read_calibration_json(const fs::path& path) {
  const json j = parse_json_file(path);
  CameraCalibration c;
  try {
    const auto& k = j.at("intrinsic");
    if (!k.is_array() || k.size() != 3) throw IoError(path.string() + ": intrinsic must be 3x3");
    c.fx = k[0][0].get<double>();
    c.cx = k[0][2].get<double>();
    c.fy = k[1][1].get<double>();
    c.cy = k[1][2].get<double>();
    const auto& ext = j.at("extrinsic");
    const auto& r = ext.at("rotation");
    if (!r.is_array() || r.size() != 3) throw IoError(path.string() + ": rotation must be 3x3");
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) c.rotation[a][b] = r[a][b].get<double>();
    }
    c.translation = point_from(ext.at("translation"), "extrinsic translation");
    const auto& size = j.at("image_size");
    c.width = size.at(0).get<int>();
    c.height = size.at(1).get<int>();
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  try {
    c.validate();
  } catch (const ConfigError& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  return c;
}

void write_calibration_json(const fs::path& path, const CameraCalibration& c) {
  json j;
  j["intrinsic"] = json::array({json::array({c.fx, 0.0, c.cx}), json::array({0.0, c.fy, c.cy}),
                                json::array({0.0, 0.0, 1.0})});
  json rot = json::array();
  for (const auto& row : c.rotation) rot.push_back(json::array({row[0], row[1], row[2]}));
  j["extrinsic"] = {{"rotation", rot}, {"translation", point_to(c.translation)}};
  j["image_size"] = json::array({c.width, c.height});
  write_text(path, j.dump(2) + "\n");
}

FrameManifest read_manifest(const fs::path& path) {
  const json j = parse_json_file(path);
  const fs::path base = path.parent_path();
  FrameManifest m;
  try {
    m.frame_id = j.at("frame_id").get<std::string>();
    m.timestamp = j.value("timestamp", 0.0);
    m.pointcloud_path = resolve(base, j.at("pointcloud_path").get<std::string>());
    const auto opt = [&](const char* key, std::optional<fs::path>& dst) {
      if (j.contains(key) && !j.at(key).is_null()) dst = resolve(base, j.at(key).get<std::string>());
    };
    opt("annotations_path", m.annotations_path);
    opt("objectiveness_path", m.objectiveness_path);
    opt("semantic_image_path", m.semantic_image_path);
    opt("camera_calib_path", m.camera_calib_path);
    opt("detections_path", m.detections_path);
    if (j.contains("sensor_origin")) m.sensor_origin = point_from(j.at("sensor_origin"), "sensor_origin");
  } catch (const json::exception& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  return m;
}

void write_manifest(const fs::path& path, const FrameManifest& m) {
  const fs::path base = path.parent_path();
  json j;
  j["frame_id"] = m.frame_id;
  j["timestamp"] = m.timestamp;
  j["pointcloud_path"] = relative_to(base, m.pointcloud_path);
  const auto opt = [&](const char* key, const std::optional<fs::path>& p) {
    if (p) j[key] = relative_to(base, *p);
  };
  opt("annotations_path", m.annotations_path);
  opt("objectiveness_path", m.objectiveness_path);
  opt("semantic_image_path", m.semantic_image_path);
  opt("camera_calib_path", m.camera_calib_path);
  opt("detections_path", m.detections_path);
  if (m.sensor_origin) j["sensor_origin"] = point_to(*m.sensor_origin);
  write_text(path, j.dump(2) + "\n");
}

std::vector<fs::path> expand_manifests(const std::vector<fs::path>& inputs) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    const json j = parse_json_file(in);
    if (j.is_array()) {
      for (const auto& entry : j) out.push_back(resolve(in.parent_path(), entry.get<std::string>()));
    } else {
      out.push_back(in);
    }
  }
  return out;
}

PointCloud load_frame_cloud(const FrameManifest& m, const Point3& default_origin) {
  RawCloud raw = read_cloud_bin(m.pointcloud_path);
  PointCloud cloud;
  cloud.frame_id = m.frame_id;
  cloud.timestamp = m.timestamp;
  cloud.sensor_origin = m.sensor_origin.value_or(default_origin);
  cloud.points.reserve(raw.points.size());
  for (const auto& p : raw.points) cloud.points.push_back(p + cloud.sensor_origin);
  return cloud;
}

void write_pgm8(const fs::path& path, const Image<std::uint8_t>& image) {
  std::string out = pgm_header(image.cols(), image.rows(), 255);
  const auto d = image.data();
  out.append(reinterpret_cast<const char*>(d.data()), d.size());
  write_text(path, out);
}

void write_pgm16(const fs::path& path, const Image<std::uint16_t>& image) {
  std::string out = pgm_header(image.cols(), image.rows(), 65535);
  for (std::uint16_t v : image.data()) {
    out.push_back(static_cast<char>(v >> 8));
    out.push_back(static_cast<char>(v & 0xff));
  }
  write_text(path, out);
}

Image<std::uint8_t> read_pgm8(const fs::path& path) {
  const auto data = read_bytes(path);
  const auto h = parse_pgm_header(data, path);
  if (h.maxval > 255) throw IoError(path.string() + " is not an 8-bit PGM");
  if (data.size() < h.offset + static_cast<std::size_t>(h.width) * h.height) throw IoError(path.string() + " is truncated");
  Image<std::uint8_t> img(h.height, h.width);
  std::memcpy(img.data().data(), data.data() + h.offset, img.size());
  return img;
}

Image<std::uint16_t> read_pgm16(const fs::path& path) {
  const auto data = read_bytes(path);
  const auto h = parse_pgm_header(data, path);
  if (h.maxval <= 255) throw IoError(path.string() + " is not a 16-bit PGM");
  if (data.size() < h.offset + 2 * static_cast<std::size_t>(h.width) * h.height) throw IoError(path.string() + " is truncated");
  Image<std::uint16_t> img(h.height, h.width);
  auto out = img.data();
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<std::uint16_t>((data[h.offset + 2 * i] << 8) | data[h.offset + 2 * i + 1]);
  }
  return img;
}

ObjectivenessGrid read_objectiveness(const fs::path& path) {
  const json meta = parse_json_file(sidecar_path(path));
  ObjectivenessGrid g;
  int rows = 0;
  int cols = 0;
  try {
    rows = meta.at("rows").get<int>();
    cols = meta.at("cols").get<int>();
    g.extent = meta.at("extent_m").get<double>();
  } catch (const json::exception& e) {
    throw IoError(sidecar_path(path).string() + ": " + e.what());
  }
  if (rows <= 0 || cols <= 0) throw IoError(sidecar_path(path).string() + ": invalid grid shape");
  const auto bytes = read_bytes(path);
  if (bytes.size() != static_cast<std::size_t>(rows) * cols * 4) {
    throw IoError(path.string() + ": expected " + std::to_string(rows * cols * 4) + " bytes");
  }
  g.values = Image<float>(rows, cols);
  auto v = g.values.data();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = load_le_float(bytes.data() + 4 * i);
  try {
    g.validate();
  } catch (const Error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  return g;
}

void write_objectiveness(const fs::path& path, const ObjectivenessGrid& grid) {
  std::vector<unsigned char> buf(grid.values.size() * 4);
  const auto v = grid.values.data();
  for (std::size_t i = 0; i < v.size(); ++i) store_le_float(v[i], buf.data() + 4 * i);
  write_bytes(path, buf.data(), buf.size());
  const json meta = {{"rows", grid.values.rows()}, {"cols", grid.values.cols()}, {"extent_m", grid.extent}};
  write_text(sidecar_path(path), meta.dump(2) + "\n");
}

SemanticImage read_semantic_image(const fs::path& path, const fs::path& calib_path) {
  SemanticImage s;
  s.labels = read_pgm8(path);
  const json meta = parse_json_file(sidecar_path(path));
  try {
    for (const auto& c : meta.at("relevant_classes")) s.relevant_classes.insert(c.get<int>());
  } catch (const json::exception& e) {
    throw IoError(sidecar_path(path).string() + ": " + e.what());
  }
  s.calib = read_calibration_json(calib_path);
  try {
    s.validate();
  } catch (const Error& e) {
    throw IoError(path.string() + ": " + e.what());
  }
  return s;
}

void write_semantic_image(const fs::path& path, const Image<std::uint8_t>& labels, const std::set<int>& relevant) {
  write_pgm8(path, labels);
  const json meta = {{"relevant_classes", std::vector<int>(relevant.begin(), relevant.end())}};
  write_text(sidecar_path(path), meta.dump(2) + "\n");
}

}  // namespace lmon::io
