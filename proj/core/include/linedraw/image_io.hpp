#pragma once

#include <filesystem>

#include "linedraw/image.hpp"

namespace linedraw {

/// 8-bit grayscale PNG with ink rendered black on white.
void write_drawing_png(const std::filesystem::path& path, const Drawing& drawing);
Drawing read_drawing_png(const std::filesystem::path& path);

/// 8-bit grayscale PNG with values stored directly (0 = black); used for depth and shading.
void write_intensity_png(const std::filesystem::path& path, const ScalarImage& image);
ScalarImage read_intensity_png(const std::filesystem::path& path);

void write_mask_png(const std::filesystem::path& path, const Mask& mask);
Mask read_mask_png(const std::filesystem::path& path);

}  // namespace linedraw
