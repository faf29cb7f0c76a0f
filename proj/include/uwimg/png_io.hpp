#pragma once

#include <filesystem>

#include "uwimg/image.hpp"

namespace uwimg {

// 8-bit RGB/RGBA/gray/palette PNG -> linear intensities in [0, 1] via
// value / 255. 16-bit color files raise FormatError.
Image read_image_png(const std::filesystem::path& path);

// Writes 8-bit RGB; values are clamped and quantized by round(v * 255).
void write_image_png(const std::filesystem::path& path, const Image& img);

// 16-bit grayscale PNG -> meters via raw_value * meters_per_unit. Any
// other layout raises FormatError.
DepthMap read_depth_png(const std::filesystem::path& path,
                        double meters_per_unit = 0.001);

// Meters -> 16-bit grayscale via round(d / meters_per_unit), saturating.
void write_depth_png(const std::filesystem::path& path, const DepthMap& depth,
                     double meters_per_unit = 0.001);

}  // namespace uwimg
