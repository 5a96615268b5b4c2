#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "linedraw/eval.hpp"
#include "support.hpp"

using namespace linedraw;

namespace {

BinaryDrawing blank(int w = 64, int h = 64) { return BinaryDrawing{Mask(w, h, 0)}; }

BinaryDrawing hline(int y, int x0, int x1, int w = 64, int h = 64) {
    BinaryDrawing d = blank(w, h);
    for (int x = x0; x <= x1; ++x) d.pixels(x, y) = 1;
    return d;
}

BinaryDrawing unite(const BinaryDrawing& a, const BinaryDrawing& b) {
    BinaryDrawing d = a;
    for (std::size_t i = 0; i < d.pixels.size(); ++i) d.pixels[i] = a.pixels[i] || b.pixels[i];
    return d;
}

// Random polyline strokes, already thinned.
BinaryDrawing random_drawing(std::mt19937_64& rng, int w, int h) {
    std::uniform_int_distribution<int> ux(2, w - 3), uy(2, h - 3), strokes(1, 4);
    Drawing d(w, h, 0.0);
    const int n = strokes(rng);
    for (int s = 0; s < n; ++s) {
        const int x0 = ux(rng), y0 = uy(rng), x1 = ux(rng), y1 = uy(rng);
        const int steps = std::max(std::abs(x1 - x0), std::abs(y1 - y0)) + 1;
        for (int i = 0; i <= steps; ++i) {
            const double a = double(i) / steps;
            d(int(std::lround(x0 + a * (x1 - x0))), int(std::lround(y0 + a * (y1 - y0)))) = 1.0;
        }
    }
    return binarize(d);
}

// Brute-force Euclidean distance from (x, y) to the nearest set pixel.
double brute_distance(const Mask& m, int x, int y) {
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < m.height(); ++j)
        for (int i = 0; i < m.width(); ++i)
            if (m(i, j)) best = std::min(best, std::hypot(double(i - x), double(j - y)));
    return best;
}

double brute_chamfer(const BinaryDrawing& a, const BinaryDrawing& b) {
    const auto directed = [](const BinaryDrawing& from, const BinaryDrawing& to) {
        double sum = 0.0;
        std::size_t n = 0;
        for (int y = 0; y < from.height(); ++y)
            for (int x = 0; x < from.width(); ++x)
                if (from.pixels(x, y)) sum += brute_distance(to.pixels, x, y), ++n;
        return sum / double(n);
    };
    return 0.5 * (directed(a, b) + directed(b, a));
}

Mask binary_mask(const Drawing& d) {
    Mask m(d.width(), d.height(), 0);
    for (std::size_t i = 0; i < d.size(); ++i) m[i] = d[i] >= 0.5;
    return m;
}

// Textbook two-subiteration Zhang-Suen on a 0/1 mask; border pixels are
// never removed.
Mask zhang_suen(Mask m) {
    const int w = m.width(), h = m.height();
    for (bool changed = true; changed;) {
        changed = false;
        for (int step = 0; step < 2; ++step) {
            std::vector<std::pair<int, int>> drop;
            for (int y = 1; y < h - 1; ++y)
                for (int x = 1; x < w - 1; ++x) {
                    if (!m(x, y)) continue;
                    const int p[8] = {m(x, y - 1), m(x + 1, y - 1), m(x + 1, y), m(x + 1, y + 1),
                                      m(x, y + 1), m(x - 1, y + 1), m(x - 1, y), m(x - 1, y - 1)};
                    int b = 0, a = 0;
                    for (int i = 0; i < 8; ++i) b += p[i], a += p[i] == 0 && p[(i + 1) % 8] == 1;
                    if (b < 2 || b > 6 || a != 1) continue;
                    const bool ok = step == 0 ? (p[0] * p[2] * p[4] == 0 && p[2] * p[4] * p[6] == 0)
                                              : (p[0] * p[2] * p[6] == 0 && p[0] * p[4] * p[6] == 0);
                    if (ok) drop.emplace_back(x, y);
                }
            for (auto [x, y] : drop) m(x, y) = 0;
            changed = changed || !drop.empty();
        }
    }
    return m;
}

BinaryDrawing shifted(const BinaryDrawing& d, int dx, int dy, int pad) {
    BinaryDrawing out = blank(d.width() + 2 * pad, d.height() + 2 * pad);
    for (int y = 0; y < d.height(); ++y)
        for (int x = 0; x < d.width(); ++x)
            if (d.pixels(x, y)) out.pixels(x + pad + dx, y + pad + dy) = 1;
    return out;
}

}  // namespace

TEST(Binarize, AllZeroIsEmpty) {
    EXPECT_TRUE(binarize(Drawing(32, 32, 0.0)).empty());
    EXPECT_TRUE(binarize(Drawing(32, 32, 0.49)).empty());
}

TEST(Binarize, ThickBarThinsToOnePixel) {
    Drawing d(64, 32, 0.0);
    for (int x = 10; x < 50; ++x)
        for (int y = 15; y <= 17; ++y) d(x, y) = 0.9;
    const BinaryDrawing b = binarize(d);
    EXPECT_EQ(b.pixels, zhang_suen(binary_mask(d)));
    int x_min = 64, x_max = -1;
    for (int x = 0; x < 64; ++x) {
        int column = 0;
        for (int y = 0; y < 32; ++y)
            if (b.pixels(x, y)) ++column, x_min = std::min(x_min, x), x_max = std::max(x_max, x);
        EXPECT_LE(column, 1);
    }
    // Zhang-Suen erodes one pixel at the left end and two at the right.
    EXPECT_EQ(x_max - x_min + 1, 37);
    EXPECT_EQ(b.count(), 37u);
}

TEST(Binarize, MatchesReferenceThinning) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 10; ++k) {
        Drawing d(40, 40, 0.0);
        for (int y = 1; y < 39; ++y)
            for (int x = 1; x < 39; ++x) d(x, y) = u(rng) < 0.45 ? 1.0 : 0.0;
        EXPECT_EQ(binarize(d).pixels, zhang_suen(binary_mask(d)));
    }
}

TEST(Binarize, IdempotentAndThin) {
    std::mt19937_64 rng(1);
    for (int k = 0; k < 10; ++k) {
        Drawing d(48, 48, 0.0);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (double& v : d.pixels()) v = u(rng) < 0.3 ? 1.0 : 0.0;
        const BinaryDrawing b = binarize(d);
        EXPECT_EQ(binarize(b.pixels), b);
        for (int y = 1; y < 47; ++y)
            for (int x = 1; x < 47; ++x) {
                if (!b.pixels(x, y)) continue;
                int n = 0;
                for (int j = -1; j <= 1; ++j)
                    for (int i = -1; i <= 1; ++i) n += b.pixels(x + i, y + j) != 0;
                EXPECT_LT(n, 9);
            }
    }
}

TEST(Binarize, ThresholdOutsideUnitIntervalThrows) {
    EXPECT_THROW(binarize(Drawing(4, 4, 0.0), 0.0), std::invalid_argument);
    EXPECT_THROW(binarize(Drawing(4, 4, 0.0), 1.0), std::invalid_argument);
}

TEST(DistanceTo, MatchesBruteForce) {
    std::mt19937_64 rng(2);
    const BinaryDrawing d = random_drawing(rng, 40, 30);
    const ScalarImage dist = distance_to(d.pixels);
    for (int y = 0; y < 30; ++y)
        for (int x = 0; x < 40; ++x) EXPECT_NEAR(dist(x, y), brute_distance(d.pixels, x, y), 1e-4);
    const ScalarImage none = distance_to(Mask(8, 8, 0));
    for (double v : none.pixels()) EXPECT_TRUE(std::isinf(v));
}

TEST(PrecisionRecall, Examples) {
    const BinaryDrawing a = hline(30, 10, 50);
    const double r = 3.0;
    PrecisionRecall pr = precision_recall(a, a, r);
    EXPECT_EQ(pr.precision, 1.0);
    EXPECT_EQ(pr.recall, 1.0);
    // Shifted by radius + 2 vertically.
    pr = precision_recall(hline(35, 10, 50), a, r);
    EXPECT_EQ(pr.precision, 0.0);
    EXPECT_EQ(pr.recall, 0.0);
    // Subset: left half of a line, with a gap too large to match the right half.
    const BinaryDrawing left = hline(30, 10, 29), whole = unite(left, hline(30, 40, 59));
    pr = precision_recall(left, whole, 1.0);
    EXPECT_EQ(pr.precision, 1.0);
    EXPECT_EQ(pr.recall, 0.5);
}

TEST(PrecisionRecall, EmptySidesAreFlagged) {
    const BinaryDrawing a = hline(30, 10, 50);
    PrecisionRecall pr = precision_recall(blank(), a, 2.0);
    EXPECT_TRUE(pr.precision_undefined);
    EXPECT_EQ(pr.precision, 0.0);
    EXPECT_FALSE(pr.recall_undefined);
    EXPECT_EQ(pr.recall, 0.0);
    pr = precision_recall(a, blank(), 2.0);
    EXPECT_TRUE(pr.recall_undefined);
    EXPECT_EQ(pr.recall, 0.0);
    EXPECT_THROW(precision_recall(a, a, 0.0), std::invalid_argument);
    EXPECT_THROW(precision_recall(a, blank(32, 64), 1.0), std::invalid_argument);
}

TEST(Iou, Examples) {
    const BinaryDrawing a = hline(30, 10, 50);
    EXPECT_EQ(iou(a, a, 2.0).value, 1.0);
    EXPECT_EQ(iou(hline(5, 5, 20), hline(55, 40, 60), 2.0).value, 0.0);
    EXPECT_EQ(iou(blank(), a, 2.0).value, 0.0);
    const IouResult both = iou(blank(), blank(), 2.0);
    EXPECT_EQ(both.value, 1.0);
    EXPECT_TRUE(both.both_empty);
}

TEST(Iou, PinnedFormula) {
    // S: 20 pixels, all within radius of H. H: 40 pixels, 20 within radius of S.
    const BinaryDrawing s = hline(30, 10, 29), h = unite(hline(31, 10, 29), hline(31, 40, 59));
    const IouResult r = iou(s, h, 1.0);
    const double intersection = (20.0 + 20.0) / 2.0, union_ = 20.0 + 40.0 - 20.0;
    EXPECT_DOUBLE_EQ(r.value, intersection / union_);
}

TEST(Chamfer, Examples) {
    const BinaryDrawing a = hline(20, 10, 50);
    EXPECT_EQ(chamfer(a, a), 0.0);
    for (int d : {1, 3, 7, 12}) EXPECT_NEAR(chamfer(a, hline(20 + d, 10, 50)), double(d), 0.1);
    std::mt19937_64 rng(4);
    for (int k = 0; k < 5; ++k) {
        const BinaryDrawing x = random_drawing(rng, 40, 40), y = random_drawing(rng, 40, 40);
        EXPECT_EQ(chamfer(x, y), chamfer(y, x));
        EXPECT_NEAR(chamfer(x, y), brute_chamfer(x, y), 1e-4);
    }
    EXPECT_THROW(chamfer(a, blank()), std::domain_error);
    EXPECT_THROW(chamfer(blank(), a), std::domain_error);
}

TEST(Chamfer, ZeroIffIdentical) {
    const BinaryDrawing a = hline(20, 10, 50);
    BinaryDrawing b = a;
    b.pixels(30, 21) = 1;
    EXPECT_GT(chamfer(a, b), 0.0);
}

TEST(RemoveSilhouettes, Examples) {
    const BinaryDrawing contour = hline(20, 5, 60);
    EXPECT_TRUE(remove_silhouettes(contour, contour.pixels, 1.0).empty());
    const BinaryDrawing far = hline(40, 5, 60);
    EXPECT_EQ(remove_silhouettes(far, contour.pixels, 3.0), far);
    const BinaryDrawing mixed = unite(hline(22, 5, 30), far);
    const BinaryDrawing once = remove_silhouettes(mixed, contour.pixels, 3.0);
    EXPECT_EQ(once, far);
    EXPECT_EQ(remove_silhouettes(once, contour.pixels, 3.0), once);
}

TEST(MostConsistent, Examples) {
    const BinaryDrawing copy = hline(20, 10, 50), outlier = hline(55, 0, 10);
    const std::vector<BinaryDrawing> three{outlier, copy, copy, copy};
    EXPECT_EQ(most_consistent(three), 1u);
    const std::vector<BinaryDrawing> two{outlier, copy};
    EXPECT_EQ(most_consistent(two), 0u);
    EXPECT_THROW(most_consistent(std::vector<BinaryDrawing>{copy}), std::invalid_argument);
    EXPECT_THROW(most_consistent(std::vector<BinaryDrawing>{copy, blank()}), std::domain_error);
}

TEST(MostConsistent, PlantedClusterAgainstBruteForce) {
    std::vector<BinaryDrawing> drawings;
    for (int k = 0; k < 5; ++k) drawings.push_back(unite(hline(20 + k % 3, 10, 50), hline(40, 20 + k, 40)));
    drawings.push_back(hline(2, 55, 62));
    drawings.insert(drawings.begin() + 2, hline(62, 0, 8));
    const std::size_t n = drawings.size();
    std::size_t best = 0;
    double best_mean = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) sum += brute_chamfer(drawings[i], drawings[j]);
        if (sum / double(n - 1) < best_mean - 1e-9) best_mean = sum / double(n - 1), best = i;
    }
    const std::size_t got = most_consistent(drawings);
    EXPECT_EQ(got, best);
    EXPECT_NE(got, 2u);
    EXPECT_NE(got, n - 1);
}

TEST(EvalProperties, RangesF1AndRadiusMonotonicity) {
    std::mt19937_64 rng(5);
    for (int k = 0; k < 20; ++k) {
        const BinaryDrawing s = random_drawing(rng, 64, 64), h = random_drawing(rng, 64, 64);
        EvalReport previous;
        bool first = true;
        for (double radius : {0.5, 1.0, 2.0, 4.0, 8.0, 16.0}) {
            const EvalReport r = evaluate(s, h, radius);
            for (double v : {r.precision, r.recall, r.iou, r.f1}) {
                EXPECT_GE(v, 0.0);
                EXPECT_LE(v, 1.0);
            }
            EXPECT_GE(r.chamfer, 0.0);
            const double f1 = r.precision + r.recall > 0.0 ? 2 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
            EXPECT_NEAR(r.f1, f1, 1e-12);
            if (!first) {
                EXPECT_GE(r.precision, previous.precision);
                EXPECT_GE(r.recall, previous.recall);
                EXPECT_GE(r.iou, previous.iou);
            }
            previous = r;
            first = false;
        }
    }
}

TEST(EvalProperties, TranslationInvariance) {
    std::mt19937_64 rng(6);
    for (int k = 0; k < 10; ++k) {
        const BinaryDrawing s = random_drawing(rng, 48, 48), h = random_drawing(rng, 48, 48);
        const EvalReport a = evaluate(s, h, 3.0);
        const EvalReport b = evaluate(shifted(s, 5, -3, 8), shifted(h, 5, -3, 8), 3.0);
        EXPECT_EQ(a.precision, b.precision);
        EXPECT_EQ(a.recall, b.recall);
        EXPECT_EQ(a.iou, b.iou);
        EXPECT_NEAR(a.chamfer, b.chamfer, 1e-9);
    }
}

TEST(Evaluate, IdenticalAndEmpty) {
    const BinaryDrawing a = hline(20, 10, 50);
    const EvalReport r = evaluate(a, a, default_near_radius(64));
    EXPECT_EQ(r.precision, 1.0);
    EXPECT_EQ(r.recall, 1.0);
    EXPECT_EQ(r.f1, 1.0);
    EXPECT_EQ(r.iou, 1.0);
    EXPECT_EQ(r.chamfer, 0.0);
    EXPECT_EQ(r.synthetic_count, 41u);
    const EvalReport e = evaluate(blank(), a, 1.0);
    EXPECT_TRUE(e.chamfer_undefined);
    EXPECT_TRUE(e.precision_undefined);
    EXPECT_EQ(e.chamfer, 0.0);
    EXPECT_EQ(e.f1, 0.0);
    EXPECT_DOUBLE_EQ(default_near_radius(768), 7.68);
}

TEST(EvalCsv, HeaderRowsAndMeans) {
    const BinaryDrawing a = hline(20, 10, 50), b = hline(23, 10, 50);
    const std::vector<EvalRow> rows{{"torus", "v0", "ours", evaluate(a, a, 2.0)},
                                    {"torus", "v1", "ours", evaluate(a, b, 2.0)},
                                    {"cube", "v0", "ours", evaluate(blank(), a, 2.0)}};
    std::ostringstream out;
    write_eval_csv(out, rows);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line[0], '#');
    std::getline(in, line);
    EXPECT_EQ(line, "shape,view,method,IoU,CD,F1,P,R");
    std::getline(in, line);
    EXPECT_EQ(line, "torus,v0,ours,100.0000,0.0000,100.0000,100.0000,100.0000");
    std::getline(in, line);
    EXPECT_EQ(line, "torus,v1,ours,0.0000,3.0000,0.0000,0.0000,0.0000");
    std::getline(in, line);
    EXPECT_EQ(line.substr(0, 20), "cube,v0,ours,0.0000,");
    const EvalReport m = mean_report(rows);
    EXPECT_DOUBLE_EQ(m.iou, 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(m.chamfer, 1.5);
}
