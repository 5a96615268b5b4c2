#pragma once

#include <array>
#include <optional>
#include <vector>

#include "linedraw/filter.hpp"

namespace linedraw {

/// Sparse form of I(t) = max(I_G(t), I_L) for repeated evaluation during
/// optimization. Only pixels on some filtered mask depend on t; everything
/// else is precomputed into a base image. Agrees exactly with compose() /
/// merge_external() and grad_thresholds().
class DrawingModel {
public:
    DrawingModel(const MapStack& maps, bool include_boundaries, const std::optional<Drawing>& external = std::nullopt);

    [[nodiscard]] int width() const { return base_.width(); }
    [[nodiscard]] int height() const { return base_.height(); }
    [[nodiscard]] bool include_boundaries() const { return include_boundaries_; }
    /// Number of pixels whose value depends on t.
    [[nodiscard]] std::size_t active_pixels() const { return entries_.size(); }

    [[nodiscard]] Drawing render(const std::array<double, 4>& t) const;
    void render_into(const std::array<double, 4>& t, Drawing& out) const;
    [[nodiscard]] std::array<double, 4> gradient(const std::array<double, 4>& t, const ScalarImage& upstream) const;

private:
    struct Entry {
        std::size_t index;
        std::array<double, 4> scalar;  // 0 where the kind's mask is not set
        double constant;               // max of contour, boundary and external values
    };
    Drawing base_;
    std::vector<Entry> entries_;
    bool include_boundaries_;
};

}  // namespace linedraw
