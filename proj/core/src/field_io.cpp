#include "linedraw/field_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace linedraw {

namespace {

constexpr std::array<char, 4> kMagic{'L', 'D', 'F', '1'};

static_assert(std::endian::native == std::endian::little, "flat float dumps assume a little-endian host");

template <typename T>
void put(std::ofstream& out, const T& value) {
    out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
    T value{};
    in.read(reinterpret_cast<char*>(&value), sizeof(T));
    if (!in) throw std::runtime_error("truncated flat float file");
    return value;
}

}  // namespace

void write_flat_floats(const std::filesystem::path& path, const FlatFloatArray& array) {
    if (array.values.size() != static_cast<std::size_t>(array.records) * array.channels)
        throw std::invalid_argument("flat float array size does not match its header");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out.write(kMagic.data(), kMagic.size());
    put(out, array.records);
    put(out, array.channels);
    out.write(reinterpret_cast<const char*>(array.values.data()),
              static_cast<std::streamsize>(array.values.size() * sizeof(float)));
}

FlatFloatArray read_flat_floats(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path.string());
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw std::runtime_error("bad magic in flat float file: " + path.string());
    FlatFloatArray array;
    array.records = get<std::uint32_t>(in);
    array.channels = get<std::uint32_t>(in);
    array.values.resize(static_cast<std::size_t>(array.records) * array.channels);
    in.read(reinterpret_cast<char*>(array.values.data()),
            static_cast<std::streamsize>(array.values.size() * sizeof(float)));
    if (!in) throw std::runtime_error("truncated flat float file: " + path.string());
    return array;
}

FlatFloatArray interleave_channels(std::span<const std::vector<double>> channels) {
    FlatFloatArray array;
    array.channels = static_cast<std::uint32_t>(channels.size());
    if (channels.empty()) return array;
    array.records = static_cast<std::uint32_t>(channels.front().size());
    array.values.reserve(static_cast<std::size_t>(array.records) * array.channels);
    for (const auto& c : channels)
        if (c.size() != array.records) throw std::invalid_argument("channel length mismatch");
    for (std::size_t r = 0; r < array.records; ++r)
        for (const auto& c : channels) array.values.push_back(static_cast<float>(c[r]));
    return array;
}

FlatFloatArray image_to_flat(const ScalarImage& image) {
    FlatFloatArray array;
    array.records = static_cast<std::uint32_t>(image.height());
    array.channels = static_cast<std::uint32_t>(image.width());
    array.values.reserve(image.size());
    for (double v : image.pixels()) array.values.push_back(static_cast<float>(v));
    return array;
}

ScalarImage flat_to_image(const FlatFloatArray& array) {
    ScalarImage image(static_cast<int>(array.channels), static_cast<int>(array.records));
    for (std::size_t i = 0; i < array.values.size(); ++i) image[i] = array.values[i];
    return image;
}

}  // namespace linedraw
