#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "linedraw/image.hpp"

namespace linedraw {

/// Thinned binary drawing (1-pixel strokes).
struct BinaryDrawing {
    Mask pixels;

    [[nodiscard]] int width() const { return pixels.width(); }
    [[nodiscard]] int height() const { return pixels.height(); }
    [[nodiscard]] std::size_t count() const;
    [[nodiscard]] bool empty() const { return count() == 0; }
    friend bool operator==(const BinaryDrawing&, const BinaryDrawing&) = default;
};

inline constexpr double default_binarize_threshold = 0.5;

/// Nearness radius in pixels for an image of the given height (1% of it).
double default_near_radius(int height);

/// Pixels with value >= threshold, thinned with Zhang-Suen.
BinaryDrawing binarize(const Drawing& drawing, double threshold = default_binarize_threshold);
/// Thins an existing mask (nonzero = drawn).
BinaryDrawing binarize(const Mask& mask);

/// Exact Euclidean distance from every pixel to the nearest set pixel;
/// infinity everywhere when the mask is empty.
ScalarImage distance_to(const Mask& mask);

struct PrecisionRecall {
    double precision = 0.0;
    double recall = 0.0;
    bool precision_undefined = false;  // empty synthetic drawing
    bool recall_undefined = false;     // empty human drawing
};

PrecisionRecall precision_recall(const BinaryDrawing& synthetic, const BinaryDrawing& human, double radius);

struct IouResult {
    double value = 0.0;
    bool both_empty = false;
};

/// ((m_s + m_h) / 2) / (|S| + |H| - min(m_s, m_h)), where m_s and m_h count
/// the pixels of each drawing within `radius` of the other.
IouResult iou(const BinaryDrawing& synthetic, const BinaryDrawing& human, double radius);

/// Mean of the two directed mean nearest distances, in pixels. Throws
/// std::domain_error("undefined Chamfer") if either side is empty.
double chamfer(const BinaryDrawing& a, const BinaryDrawing& b);

/// Mean nearest distance from the pixels of `from` to the set whose distance
/// transform is given.
double directed_chamfer(const BinaryDrawing& from, const ScalarImage& distance_to_other);

/// Drops drawn pixels within `radius` of the contour mask.
BinaryDrawing remove_silhouettes(const BinaryDrawing& drawing, const Mask& contour_mask, double radius);

/// argmin_i mean_{j != i} chamfer(d_i, d_j); ties go to the lowest index.
std::size_t most_consistent(std::span<const BinaryDrawing> drawings);

struct EvalReport {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double iou = 0.0;
    double chamfer = 0.0;
    std::size_t synthetic_count = 0;
    std::size_t human_count = 0;
    bool precision_undefined = false;
    bool recall_undefined = false;
    bool iou_both_empty = false;
    bool chamfer_undefined = false;  // chamfer is reported as 0 then
};

EvalReport evaluate(const BinaryDrawing& synthetic, const BinaryDrawing& human, double radius);

struct EvalRow {
    std::string shape;
    std::string view;
    std::string method;
    EvalReport report;
};

/// Header (protocol comment plus column names) and one line per row; IoU,
/// F1, P and R in percent, CD in pixels.
void write_eval_csv(std::ostream& out, std::span<const EvalRow> rows);

/// Mean of each metric over rows (chamfer over rows where it is defined).
EvalReport mean_report(std::span<const EvalRow> rows);

}  // namespace linedraw
