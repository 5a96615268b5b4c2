#pragma once

#include <array>
#include <limits>
#include <optional>
#include <span>
#include <string>

#include "linedraw/image.hpp"
#include "linedraw/map_stack.hpp"

namespace linedraw {

/// Threshold vector t = {t_S, t_R, t_V, t_A} plus the boundary switch.
/// An infinite threshold removes its line kind.
struct ThresholdSet {
    double t_s = 0.0;
    double t_r = 0.0;
    double t_v = 0.0;
    double t_a = 0.0;
    bool include_boundaries = false;

    [[nodiscard]] std::array<double, 4> values() const { return {t_s, t_r, t_v, t_a}; }
    static ThresholdSet from_values(const std::array<double, 4>& v, bool include_boundaries = false);
    /// Throws std::invalid_argument if any threshold is negative or NaN.
    void validate() const;
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const ThresholdSet&, const ThresholdSet&) = default;
};

inline constexpr double threshold_off = std::numeric_limits<double>::infinity();

struct FilterGradient {
    double d_s = 0.0;
    double d_r = 0.0;
    double d_v = 0.0;
    double d_a = 0.0;

    [[nodiscard]] std::array<double, 4> values() const { return {d_s, d_r, d_v, d_a}; }
};

/// max(1 - t / s, 0) on mask pixels with s > 0, else 0.
double filtered_intensity(bool on_mask, double scalar, double threshold);

ScalarImage filter_map(const Mask& mask, const ScalarImage& scalar, double threshold);
ScalarImage filter_sc(const MapStack& maps, double t_s);
std::pair<ScalarImage, ScalarImage> filter_rv(const MapStack& maps, double t_r, double t_v);
ScalarImage filter_ar(const MapStack& maps, double t_a);

/// Pixelwise max of same-shaped images.
ScalarImage max_images(std::span<const ScalarImage* const> images);

ScalarImage mask_to_image(const Mask& mask);

/// I_G = max(I_S, I_R, I_V, I_A, I_C, [I_B]).
Drawing compose(const MapStack& maps, const ThresholdSet& t);

/// max(I_G, I_L); identity when I_L is absent.
Drawing merge_external(const Drawing& geometric, const std::optional<Drawing>& external);

/// Gradient of L(I(t)) for the merged drawing I(t) = max(I_G(t), I_L), given
/// upstream = dL/dI. At each pixel only the map attaining the max carries
/// gradient; ties go to the later map in the order S, R, V, A, C, B, I_L.
/// A filtered pixel is differentiable where 0 < 1 - t/s <= 1, the right-hand
/// derivative being used at t = 0.
FilterGradient grad_thresholds(const MapStack& maps, const ThresholdSet& t, const ScalarImage& upstream,
                               const std::optional<Drawing>& external = std::nullopt);

}  // namespace linedraw
