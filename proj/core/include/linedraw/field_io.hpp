#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "linedraw/image.hpp"

namespace linedraw {

/// Flat float dump used for per-vertex fields and raw image maps.
///
/// Layout (little-endian): 4-byte magic "LDF1", uint32 record count,
/// uint32 channel count, then count * channels float32 values, record-major.
/// Images are stored with one record per row and one channel per column.
struct FlatFloatArray {
    std::uint32_t records = 0;
    std::uint32_t channels = 0;
    std::vector<float> values;
};

void write_flat_floats(const std::filesystem::path& path, const FlatFloatArray& array);
FlatFloatArray read_flat_floats(const std::filesystem::path& path);

/// Interleaves per-vertex channels into a flat array; all channels must share a length.
FlatFloatArray interleave_channels(std::span<const std::vector<double>> channels);

FlatFloatArray image_to_flat(const ScalarImage& image);
ScalarImage flat_to_image(const FlatFloatArray& array);

}  // namespace linedraw
