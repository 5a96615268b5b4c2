#include "linedraw/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <stdexcept>

#include <opencv2/imgproc.hpp>
#include <opencv2/ximgproc.hpp>

#include "linedraw/parallel.hpp"

namespace linedraw {

std::size_t BinaryDrawing::count() const {
    return static_cast<std::size_t>(std::count_if(pixels.pixels().begin(), pixels.pixels().end(),
                                                   [](std::uint8_t v) { return v != 0; }));
}

double default_near_radius(int height) { return 0.01 * height; }

BinaryDrawing binarize(const Mask& mask) {
    BinaryDrawing out{Mask(mask.width(), mask.height(), 0)};
    if (mask.empty()) return out;
    cv::Mat src(mask.height(), mask.width(), CV_8U);
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x) src.at<std::uint8_t>(y, x) = mask(x, y) ? 255 : 0;
    cv::Mat thin;
    cv::ximgproc::thinning(src, thin, cv::ximgproc::THINNING_ZHANGSUEN);
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x) out.pixels(x, y) = thin.at<std::uint8_t>(y, x) ? 1 : 0;
    return out;
}

BinaryDrawing binarize(const Drawing& drawing, double threshold) {
    if (!(threshold > 0.0 && threshold < 1.0)) throw std::invalid_argument("binarize threshold must be in (0,1)");
    Mask mask(drawing.width(), drawing.height(), 0);
    for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = drawing[i] >= threshold ? 1 : 0;
    return binarize(mask);
}

ScalarImage distance_to(const Mask& mask) {
    ScalarImage out(mask.width(), mask.height(), std::numeric_limits<double>::infinity());
    if (mask.empty()) return out;
    bool any = false;
    cv::Mat src(mask.height(), mask.width(), CV_8U);
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x) {
            // distanceTransform measures the distance to the nearest zero pixel.
            src.at<std::uint8_t>(y, x) = mask(x, y) ? 0 : 255;
            any = any || mask(x, y);
        }
    if (!any) return out;
    cv::Mat dist;
    cv::distanceTransform(src, dist, cv::DIST_L2, cv::DIST_MASK_PRECISE, CV_32F);
    for (int y = 0; y < mask.height(); ++y)
        for (int x = 0; x < mask.width(); ++x) out(x, y) = static_cast<double>(dist.at<float>(y, x));
    return out;
}

namespace {

void check_pair(const BinaryDrawing& a, const BinaryDrawing& b) {
    require_same_shape(a.pixels, b.pixels, "evaluated drawings");
}

void check_radius(double radius) {
    if (!(radius > 0.0)) throw std::invalid_argument("nearness radius must be positive");
}

// Pixels of `from` within `radius` of the set described by `dist`.
std::size_t matched(const BinaryDrawing& from, const ScalarImage& dist, double radius) {
    std::size_t n = 0;
    for (std::size_t i = 0; i < from.pixels.size(); ++i)
        if (from.pixels[i] && dist[i] <= radius) ++n;
    return n;
}

}  // namespace

PrecisionRecall precision_recall(const BinaryDrawing& synthetic, const BinaryDrawing& human, double radius) {
    check_pair(synthetic, human);
    check_radius(radius);
    PrecisionRecall pr;
    const std::size_t ns = synthetic.count(), nh = human.count();
    pr.precision_undefined = ns == 0;
    pr.recall_undefined = nh == 0;
    if (ns > 0) pr.precision = static_cast<double>(matched(synthetic, distance_to(human.pixels), radius)) / ns;
    if (nh > 0) pr.recall = static_cast<double>(matched(human, distance_to(synthetic.pixels), radius)) / nh;
    return pr;
}

IouResult iou(const BinaryDrawing& synthetic, const BinaryDrawing& human, double radius) {
    check_pair(synthetic, human);
    check_radius(radius);
    const std::size_t ns = synthetic.count(), nh = human.count();
    if (ns == 0 && nh == 0) return {1.0, true};
    if (ns == 0 || nh == 0) return {0.0, false};
    const double ms = static_cast<double>(matched(synthetic, distance_to(human.pixels), radius));
    const double mh = static_cast<double>(matched(human, distance_to(synthetic.pixels), radius));
    const double intersection = 0.5 * (ms + mh);
    const double uni = static_cast<double>(ns + nh) - std::min(ms, mh);
    return {intersection / uni, false};
}

double directed_chamfer(const BinaryDrawing& from, const ScalarImage& distance_to_other) {
    require_same_shape(from.pixels, distance_to_other, "chamfer drawing vs distance map");
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < from.pixels.size(); ++i) {
        if (!from.pixels[i]) continue;
        sum += distance_to_other[i];
        ++n;
    }
    if (n == 0 || !std::isfinite(sum)) throw std::domain_error("undefined Chamfer");
    return sum / static_cast<double>(n);
}

double chamfer(const BinaryDrawing& a, const BinaryDrawing& b) {
    check_pair(a, b);
    if (a.empty() || b.empty()) throw std::domain_error("undefined Chamfer");
    return 0.5 * (directed_chamfer(a, distance_to(b.pixels)) + directed_chamfer(b, distance_to(a.pixels)));
}

BinaryDrawing remove_silhouettes(const BinaryDrawing& drawing, const Mask& contour_mask, double radius) {
    require_same_shape(drawing.pixels, contour_mask, "drawing vs contour mask");
    check_radius(radius);
    const ScalarImage dist = distance_to(contour_mask);
    BinaryDrawing out = drawing;
    for (std::size_t i = 0; i < out.pixels.size(); ++i)
        if (out.pixels[i] && dist[i] <= radius) out.pixels[i] = 0;
    return out;
}

std::size_t most_consistent(std::span<const BinaryDrawing> drawings) {
    const std::size_t n = drawings.size();
    if (n < 2) throw std::invalid_argument("most_consistent needs at least 2 drawings");
    for (const BinaryDrawing& d : drawings) {
        check_pair(drawings[0], d);
        if (d.empty()) throw std::domain_error("undefined Chamfer");
    }
    std::vector<ScalarImage> dist(n);
    parallel_for(n, [&](std::size_t i) { dist[i] = distance_to(drawings[i].pixels); });
    // directed[i][j] = mean distance from drawing i to drawing j.
    std::vector<double> directed(n * n, 0.0);
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) directed[i * n + j] = directed_chamfer(drawings[i], dist[j]);
    });
    std::size_t best = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) sum += 0.5 * (directed[i * n + j] + directed[j * n + i]);
        const double mean = sum / static_cast<double>(n - 1);
        if (mean < best_cost) {
            best_cost = mean;
            best = i;
        }
    }
    return best;
}

EvalReport evaluate(const BinaryDrawing& synthetic, const BinaryDrawing& human, double radius) {
    EvalReport r;
    const PrecisionRecall pr = precision_recall(synthetic, human, radius);
    r.precision = pr.precision;
    r.recall = pr.recall;
    r.precision_undefined = pr.precision_undefined;
    r.recall_undefined = pr.recall_undefined;
    r.f1 = r.precision + r.recall > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
    const IouResult u = iou(synthetic, human, radius);
    r.iou = u.value;
    r.iou_both_empty = u.both_empty;
    r.synthetic_count = synthetic.count();
    r.human_count = human.count();
    if (r.synthetic_count == 0 || r.human_count == 0) {
        r.chamfer_undefined = true;
        r.chamfer = 0.0;
    } else {
        r.chamfer = chamfer(synthetic, human);
    }
    return r;
}

EvalReport mean_report(std::span<const EvalRow> rows) {
    EvalReport m;
    if (rows.empty()) return m;
    std::size_t chamfer_rows = 0;
    for (const EvalRow& row : rows) {
        const EvalReport& r = row.report;
        m.precision += r.precision;
        m.recall += r.recall;
        m.f1 += r.f1;
        m.iou += r.iou;
        m.synthetic_count += r.synthetic_count;
        m.human_count += r.human_count;
        if (!r.chamfer_undefined) {
            m.chamfer += r.chamfer;
            ++chamfer_rows;
        }
    }
    const double n = static_cast<double>(rows.size());
    m.precision /= n;
    m.recall /= n;
    m.f1 /= n;
    m.iou /= n;
    if (chamfer_rows > 0)
        m.chamfer /= static_cast<double>(chamfer_rows);
    else
        m.chamfer_undefined = true;
    return m;
}

void write_eval_csv(std::ostream& out, std::span<const EvalRow> rows) {
    out << "# protocol: both drawings thinned before matching; IoU, F1, P, R in percent; CD in pixels\n";
    out << "shape,view,method,IoU,CD,F1,P,R\n";
    const auto old_flags = out.flags();
    const auto old_precision = out.precision();
    out << std::fixed << std::setprecision(4);
    for (const EvalRow& row : rows) {
        const EvalReport& r = row.report;
        out << row.shape << ',' << row.view << ',' << row.method << ',' << 100.0 * r.iou << ',';
        if (r.chamfer_undefined)
            out << "nan";
        else
            out << r.chamfer;
        out << ',' << 100.0 * r.f1 << ',' << 100.0 * r.precision << ',' << 100.0 * r.recall << '\n';
    }
    out.flags(old_flags);
    out.precision(old_precision);
}

}  // namespace linedraw
