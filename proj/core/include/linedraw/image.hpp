#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace linedraw {

/// Row-major single-channel image. (0, 0) is the top-left pixel.
template <typename T>
class Image {
public:
    using value_type = T;

    Image() = default;
    Image(int width, int height, T fill = T{})
        : width_(width), height_(height), data_(checked_size(width, height), fill) {}

    [[nodiscard]] int width() const { return width_; }
    [[nodiscard]] int height() const { return height_; }
    [[nodiscard]] std::size_t size() const { return data_.size(); }
    [[nodiscard]] bool empty() const { return data_.empty(); }

    T& operator()(int x, int y) { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    const T& operator()(int x, int y) const { return data_[static_cast<std::size_t>(y) * width_ + x]; }
    T& operator[](std::size_t i) { return data_[i]; }
    const T& operator[](std::size_t i) const { return data_[i]; }

    [[nodiscard]] bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    template <typename U>
    [[nodiscard]] bool same_shape(const Image<U>& other) const {
        return width_ == other.width() && height_ == other.height();
    }

    std::span<T> pixels() { return data_; }
    std::span<const T> pixels() const { return data_; }
    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }

    void fill(T value) { std::fill(data_.begin(), data_.end(), value); }

    friend bool operator==(const Image& a, const Image& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
    }

private:
    static std::size_t checked_size(int width, int height) {
        if (width < 0 || height < 0) throw std::invalid_argument("image dimensions must be non-negative");
        return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

using Mask = Image<std::uint8_t>;
using ScalarImage = Image<double>;

/// Grayscale line drawing: 0 = blank paper, 1 = full ink.
using Drawing = Image<double>;

template <typename A, typename B>
void require_same_shape(const Image<A>& a, const Image<B>& b, const char* what) {
    if (!a.same_shape(b)) {
        throw std::invalid_argument(std::string("dimension mismatch: ") + what + " (" + std::to_string(a.width()) +
                                    "x" + std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                                    std::to_string(b.height()) + ")");
    }
}

}  // namespace linedraw
