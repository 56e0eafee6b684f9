#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "lmon/image.hpp"
#include "lmon/monitor.hpp"
#include "lmon/obstacle_filter.hpp"
#include "lmon/occupancy.hpp"
#include "lmon/projection.hpp"

namespace lmon {

/// Linear 16-bit encoding: value = offset + scale * pixel, pixel 0 = EMPTY.
struct PixelScale {
  double scale = 0.001;
  double offset = 0.0;
};

inline constexpr PixelScale kHeightScale{0.001, -10.0};
inline constexpr PixelScale kDepthScale{0.002, 0.0};

/// Encodes one range-image channel. The top image row is the highest
/// elevation.
Image<std::uint16_t> encode_channel(const RangeImages& images, const Image<double>& channel, PixelScale scale);

/// P_O as 0..255; EMPTY pixels are 0.
Image<std::uint8_t> encode_scores(const RangeImages& images, const ScoreImage& scores);

/// Occupied = 255, free = 0. The top row is the farthest forward cell
/// row and the left column is the leftmost (largest y) cell column.
Image<std::uint8_t> encode_grid(const OccupancyGrid& grid);

/// Writes a 16-bit channel PGM and its `<path>.json` sidecar
/// {scale, offset, empty_value, row_order}.
void write_channel_pgm(const std::filesystem::path& path, const Image<std::uint16_t>& image, PixelScale scale);
void write_grid_pgm(const std::filesystem::path& path, const OccupancyGrid& grid);

/// Verdict JSON: {frame_id, confirmed, unconfirmed, outside_zone,
/// missed_regions: [{bounds, cell_count}], corrected: [boxes]}.
std::string verdict_json(const std::string& frame_id, const MonitorVerdict& verdict);

/// Grid summary for frames without a primary list.
std::string grid_summary_json(const std::string& frame_id, const OccupancyGrid& grid, std::size_t kept_points,
                              std::size_t input_points);

}  // namespace lmon
