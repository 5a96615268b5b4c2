#include "linedraw/image_io.hpp"

#include <algorithm>
#include <cmath>
#include <opencv2/imgcodecs.hpp>
#include <stdexcept>

namespace linedraw {

namespace {

std::uint8_t to_byte(double v) {
    return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

void write_gray(const std::filesystem::path& path, const cv::Mat& mat) {
    if (!cv::imwrite(path.string(), mat)) throw std::runtime_error("cannot write image: " + path.string());
}

cv::Mat read_gray(const std::filesystem::path& path) {
    if (!std::filesystem::exists(path)) throw std::runtime_error("image not found: " + path.string());
    cv::Mat mat = cv::imread(path.string(), cv::IMREAD_GRAYSCALE);
    if (mat.empty()) throw std::runtime_error("cannot decode image: " + path.string());
    return mat;
}

}  // namespace

void write_drawing_png(const std::filesystem::path& path, const Drawing& drawing) {
    cv::Mat mat(drawing.height(), drawing.width(), CV_8UC1);
    for (int y = 0; y < drawing.height(); ++y)
        for (int x = 0; x < drawing.width(); ++x) mat.at<std::uint8_t>(y, x) = to_byte(1.0 - drawing(x, y));
    write_gray(path, mat);
}

Drawing read_drawing_png(const std::filesystem::path& path) {
    const cv::Mat mat = read_gray(path);
    Drawing out(mat.cols, mat.rows);
    for (int y = 0; y < mat.rows; ++y)
        for (int x = 0; x < mat.cols; ++x) out(x, y) = 1.0 - mat.at<std::uint8_t>(y, x) / 255.0;
    return out;
}

void write_intensity_png(const std::filesystem::path& path, const ScalarImage& image) {
    cv::Mat mat(image.height(), image.width(), CV_8UC1);
    for (int y = 0; y < image.height(); ++y)
        for (int x = 0; x < image.width(); ++x) mat.at<std::uint8_t>(y, x) = to_byte(image(x, y));
    write_gray(path, mat);
}

ScalarImage read_intensity_png(const std::filesystem::path& path) {
    const cv::Mat mat = read_gray(path);
    ScalarImage out(mat.cols, mat.rows);
    for (int y = 0; y < mat.rows; ++y)
        for (int x = 0; x < mat.cols; ++x) out(x, y) = mat.at<std::uint8_t>(y, x) / 255.0;
    return out;
}

void write_mask_png(const std::filesystem::path& path, const Mask& mask) {
    cv::Mat mat(mask.height(), mask.width(), CV_8UC1);
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x) mat.at<std::uint8_t>(y, x) = mask(x, y) ? 0 : 255;
    write_gray(path, mat);
}

Mask read_mask_png(const std::filesystem::path& path) {
    const cv::Mat mat = read_gray(path);
    Mask out(mat.cols, mat.rows);
    for (int y = 0; y < mat.rows; ++y)
        for (int x = 0; x < mat.cols; ++x) out(x, y) = mat.at<std::uint8_t>(y, x) < 128 ? 1 : 0;
    return out;
}

}  // namespace linedraw
