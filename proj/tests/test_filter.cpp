#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "linedraw/drawing_model.hpp"
#include "linedraw/filter.hpp"
#include "support.hpp"

using namespace linedraw;

namespace {

// Single-pixel stack with every map blank.
MapStack one_pixel() { return empty_map_stack(1, 1); }

ScalarImage random_upstream(int w, int h, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ScalarImage up(w, h);
    for (double& v : up.pixels()) v = u(rng);
    return up;
}

double max_value(const ScalarImage& s) {
    double m = 0.0;
    for (double v : s.pixels()) m = std::max(m, v);
    return m;
}

}  // namespace

TEST(FilterSc, ZeroThresholdIsTheMask) {
    std::mt19937_64 rng(1);
    const MapStack m = test::random_map_stack(24, 20, rng);
    const ScalarImage i = filter_sc(m, 0.0);
    for (std::size_t p = 0; p < i.size(); ++p) EXPECT_EQ(i[p], m.suggestive[p] ? 1.0 : 0.0);
}

TEST(FilterSc, DoubleScalarGivesHalf) {
    MapStack m = one_pixel();
    m.suggestive[0] = 1;
    m.dkr[0] = 0.8;
    EXPECT_DOUBLE_EQ(filter_sc(m, 0.4)[0], 0.5);
}

TEST(FilterSc, ThresholdAboveMaxClearsEverything) {
    std::mt19937_64 rng(2);
    const MapStack m = test::random_map_stack(24, 20, rng);
    const ScalarImage i = filter_sc(m, max_value(m.dkr));
    for (double v : i.pixels()) EXPECT_EQ(v, 0.0);
}

TEST(FilterSc, ZeroScalarInsideMaskIsBlank) {
    MapStack m = one_pixel();
    m.suggestive[0] = 1;
    EXPECT_EQ(filter_sc(m, 0.0)[0], 0.0);
}

TEST(FilterRv, Cases) {
    std::mt19937_64 rng(3);
    MapStack m = test::random_map_stack(24, 20, rng);
    const auto [r0, v0] = filter_rv(m, 0.0, 0.0);
    for (std::size_t p = 0; p < r0.size(); ++p) {
        EXPECT_EQ(r0[p], m.ridge[p] ? 1.0 : 0.0);
        EXPECT_EQ(v0[p], m.valley[p] ? 1.0 : 0.0);
    }
    MapStack one = one_pixel();
    one.ridge[0] = 1;
    one.kmax[0] = 0.7;
    one.valley[0] = 1;
    one.kmin[0] = 0.3;
    const auto [r1, v1] = filter_rv(one, 0.7, 0.3);
    EXPECT_EQ(r1[0], 0.0);
    EXPECT_EQ(v1[0], 0.0);
    // Scaling both t and the curvature maps leaves the output unchanged.
    const auto [ra, va] = filter_rv(m, 0.3, 0.5);
    for (double& s : m.kmax.pixels()) s *= 2.0;
    for (double& s : m.kmin.pixels()) s *= 2.0;
    const auto [rb, vb] = filter_rv(m, 0.6, 1.0);
    for (std::size_t p = 0; p < ra.size(); ++p) {
        EXPECT_NEAR(ra[p], rb[p], 1e-15);
        EXPECT_NEAR(va[p], vb[p], 1e-15);
    }
}

TEST(FilterAr, Cases) {
    std::mt19937_64 rng(4);
    const MapStack m = test::random_map_stack(24, 20, rng);
    const ScalarImage i0 = filter_ar(m, 0.0);
    for (std::size_t p = 0; p < i0.size(); ++p) EXPECT_EQ(i0[p], m.apparent[p] ? 1.0 : 0.0);
    const ScalarImage cleared = filter_ar(m, max_value(m.kview));
    for (double v : cleared.pixels()) EXPECT_EQ(v, 0.0);
    MapStack one = one_pixel();
    one.apparent[0] = 1;
    one.kview[0] = 1.2;
    EXPECT_DOUBLE_EQ(filter_ar(one, 0.6)[0], 0.5);
}

TEST(FilterMaps, MonotoneInThreshold) {
    std::mt19937_64 rng(5);
    const MapStack m = test::random_map_stack(32, 32, rng);
    double prev_t = 0.0;
    ScalarImage prev = filter_sc(m, prev_t);
    for (double t : {0.1, 0.3, 0.7, 1.5, 3.0}) {
        const ScalarImage cur = filter_sc(m, t);
        for (std::size_t p = 0; p < cur.size(); ++p) EXPECT_LE(cur[p], prev[p]);
        prev = cur;
    }
}

TEST(Compose, HugeThresholdsLeaveContoursAndBoundaries) {
    std::mt19937_64 rng(6);
    const MapStack m = test::random_map_stack(32, 32, rng);
    const Drawing d = compose(m, ThresholdSet{1e9, 1e9, 1e9, 1e9, true});
    for (std::size_t p = 0; p < d.size(); ++p) EXPECT_EQ(d[p], (m.contour[p] || m.boundary[p]) ? 1.0 : 0.0);
    const Drawing off = compose(m, ThresholdSet{threshold_off, threshold_off, threshold_off, threshold_off, false});
    for (std::size_t p = 0; p < off.size(); ++p) EXPECT_EQ(off[p], m.contour[p] ? 1.0 : 0.0);
}

TEST(Compose, SingleMapPlusContours) {
    std::mt19937_64 rng(7);
    MapStack m = test::random_map_stack(32, 32, rng);
    m.ridge.fill(0);
    m.kmax.fill(0.0);
    m.valley.fill(0);
    m.kmin.fill(0.0);
    m.apparent.fill(0);
    m.kview.fill(0.0);
    const ScalarImage s = filter_sc(m, 0.3);
    const Drawing d = compose(m, ThresholdSet{0.3, 0.0, 0.0, 0.0, false});
    for (std::size_t p = 0; p < d.size(); ++p) EXPECT_EQ(d[p], m.contour[p] ? 1.0 : s[p]);
}

TEST(Compose, BoundsAndRange) {
    std::mt19937_64 rng(8);
    const MapStack m = test::random_map_stack(40, 30, rng);
    const Drawing d = compose(m, ThresholdSet{0.2, 0.5, 0.1, 0.9, true});
    for (std::size_t p = 0; p < d.size(); ++p) {
        EXPECT_GE(d[p], m.contour[p] ? 1.0 : 0.0);
        EXPECT_GE(d[p], 0.0);
        EXPECT_LE(d[p], 1.0);
    }
}

TEST(Compose, PermutationInvariantAndIdempotent) {
    std::mt19937_64 rng(9);
    const MapStack m = test::random_map_stack(32, 32, rng);
    const ThresholdSet t{0.2, 0.4, 0.6, 0.8, true};
    const Drawing d = compose(m, t);
    // Same images combined through max_images in another order.
    const ScalarImage s = filter_sc(m, t.t_s), a = filter_ar(m, t.t_a);
    const auto [r, v] = filter_rv(m, t.t_r, t.t_v);
    const ScalarImage c = mask_to_image(m.contour), b = mask_to_image(m.boundary);
    const ScalarImage* order[] = {&b, &a, &c, &v, &s, &r};
    EXPECT_EQ(max_images(order), d);
    // max(I_G, I_G) = I_G.
    const ScalarImage* twice[] = {&d, &d};
    EXPECT_EQ(max_images(twice), d);
}

TEST(Compose, DimensionMismatchThrows) {
    MapStack m = empty_map_stack(8, 8);
    m.ridge = Mask(4, 8);
    EXPECT_THROW(compose(m, ThresholdSet{}), std::invalid_argument);
}

TEST(MergeExternal, Cases) {
    std::mt19937_64 rng(10);
    const MapStack m = test::random_map_stack(16, 16, rng);
    const Drawing g = compose(m, ThresholdSet{0.3, 0.3, 0.3, 0.3, false});
    EXPECT_EQ(merge_external(g, std::nullopt), g);
    EXPECT_EQ(merge_external(g, Drawing(16, 16, 1.0)), Drawing(16, 16, 1.0));
    EXPECT_EQ(merge_external(g, g), g);
    EXPECT_THROW(merge_external(g, Drawing(8, 16, 0.0)), std::invalid_argument);
}

TEST(GradThresholds, InactiveThresholdsGiveZero) {
    std::mt19937_64 rng(11);
    const MapStack m = test::random_map_stack(24, 24, rng);
    const ScalarImage up = random_upstream(24, 24, rng);
    const FilterGradient g = grad_thresholds(m, ThresholdSet{5.0, 5.0, 5.0, 5.0, false}, up);
    for (double v : g.values()) EXPECT_EQ(v, 0.0);
}

TEST(GradThresholds, SingleScPixel) {
    MapStack m = one_pixel();
    m.suggestive[0] = 1;
    m.dkr[0] = 2.0;
    const FilterGradient g = grad_thresholds(m, ThresholdSet{1.0, 0.0, 0.0, 0.0, false}, ScalarImage(1, 1, 1.0));
    EXPECT_DOUBLE_EQ(g.d_s, -0.5);
    EXPECT_EQ(g.d_r, 0.0);
    EXPECT_EQ(g.d_v, 0.0);
    EXPECT_EQ(g.d_a, 0.0);
}

TEST(GradThresholds, ContourMasksFilteredPixel) {
    MapStack m = one_pixel();
    m.suggestive[0] = 1;
    m.dkr[0] = 2.0;
    m.contour[0] = 1;
    EXPECT_EQ(grad_thresholds(m, ThresholdSet{1.0, 0, 0, 0, false}, ScalarImage(1, 1, 1.0)).d_s, 0.0);
}

TEST(GradThresholds, TieGoesToLaterKind) {
    MapStack m = one_pixel();
    m.suggestive[0] = 1;
    m.dkr[0] = 2.0;
    m.ridge[0] = 1;
    m.kmax[0] = 2.0;
    const FilterGradient g = grad_thresholds(m, ThresholdSet{1.0, 1.0, 0, 0, false}, ScalarImage(1, 1, 1.0));
    EXPECT_EQ(g.d_s, 0.0);
    EXPECT_DOUBLE_EQ(g.d_r, -0.5);
}

TEST(GradThresholds, MatchesFiniteDifferences) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> tdist(0.05, 1.8);
    constexpr double h = 1e-4;
    int checked = 0;
    for (int attempt = 0; attempt < 400 && checked < 40; ++attempt) {
        const MapStack m = test::random_map_stack(20, 20, rng, 0.25);
        const bool boundaries = attempt % 2 == 0;
        std::optional<Drawing> external;
        if (attempt % 3 == 0) {
            Drawing e(20, 20, 0.0);
            std::uniform_real_distribution<double> u(0.0, 1.0);
            for (double& v : e.pixels()) v = u(rng) < 0.1 ? u(rng) : 0.0;
            external = e;
        }
        const std::array<double, 4> t{tdist(rng), tdist(rng), tdist(rng), tdist(rng)};
        if (!test::kink_free(m, t, boundaries, external, h)) continue;
        const ScalarImage up = random_upstream(20, 20, rng);
        const auto g = grad_thresholds(m, ThresholdSet::from_values(t, boundaries), up, external).values();
        for (int k = 0; k < 4; ++k) {
            std::array<double, 4> tp = t, tm = t;
            tp[k] += h;
            tm[k] -= h;
            const double fd = (test::linear_objective(m, tp, boundaries, external, up) -
                               test::linear_objective(m, tm, boundaries, external, up)) /
                              (2.0 * h);
            const double scale = std::max({std::abs(fd), std::abs(g[k]), 1e-12});
            EXPECT_LE(std::abs(fd - g[k]) / scale, 1e-3) << "k=" << k << " fd=" << fd << " g=" << g[k];
        }
        ++checked;
    }
    EXPECT_GE(checked, 20);
}

TEST(DrawingModel, AgreesWithDenseComposition) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> tdist(0.0, 2.0);
    for (int trial = 0; trial < 10; ++trial) {
        const MapStack m = test::random_map_stack(30, 26, rng);
        const bool boundaries = trial % 2 == 1;
        std::optional<Drawing> external;
        if (trial % 3 == 0) {
            Drawing e(30, 26, 0.0);
            for (double& v : e.pixels()) v = tdist(rng) < 0.2 ? 0.5 * tdist(rng) : 0.0;
            external = e;
        }
        const DrawingModel model(m, boundaries, external);
        const std::array<double, 4> t{tdist(rng), tdist(rng), 0.0, trial == 4 ? threshold_off : tdist(rng)};
        const ThresholdSet ts = ThresholdSet::from_values(t, boundaries);
        EXPECT_EQ(model.render(t), merge_external(compose(m, ts), external));
        const ScalarImage up = random_upstream(30, 26, rng);
        EXPECT_EQ(model.gradient(t, up), grad_thresholds(m, ts, up, external).values());
    }
}

TEST(ThresholdSet, Validation) {
    EXPECT_THROW((ThresholdSet{-0.1, 0, 0, 0, false}.validate()), std::invalid_argument);
    EXPECT_THROW((ThresholdSet{0, std::nan(""), 0, 0, false}.validate()), std::invalid_argument);
    EXPECT_NO_THROW((ThresholdSet{0, 0, threshold_off, 1, true}.validate()));
}
