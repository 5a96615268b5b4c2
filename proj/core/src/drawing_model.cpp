#include "linedraw/drawing_model.hpp"

#include <algorithm>

namespace linedraw {

DrawingModel::DrawingModel(const MapStack& maps, bool include_boundaries, const std::optional<Drawing>& external)
    : include_boundaries_(include_boundaries) {
    maps.validate();
    base_ = Drawing(maps.width, maps.height, 0.0);
    if (external) require_same_shape(base_, *external, "external line image");
    const Mask* masks[4] = {&maps.suggestive, &maps.ridge, &maps.valley, &maps.apparent};
    const ScalarImage* scalars[4] = {&maps.dkr, &maps.kmax, &maps.kmin, &maps.kview};
    for (std::size_t i = 0; i < base_.size(); ++i) {
        double constant = maps.contour[i] ? 1.0 : 0.0;
        if (include_boundaries && maps.boundary[i]) constant = 1.0;
        if (external) constant = std::max(constant, (*external)[i]);
        base_[i] = constant;
        Entry e{i, {0.0, 0.0, 0.0, 0.0}, constant};
        bool any = false;
        for (int k = 0; k < 4; ++k) {
            if ((*masks[k])[i] && (*scalars[k])[i] > 0.0) {
                e.scalar[k] = (*scalars[k])[i];
                any = true;
            }
        }
        // A pixel already at full ink cannot change.
        if (any && constant < 1.0) entries_.push_back(e);
    }
}

void DrawingModel::render_into(const std::array<double, 4>& t, Drawing& out) const {
    if (!out.same_shape(base_)) out = Drawing(base_.width(), base_.height());
    std::copy(base_.pixels().begin(), base_.pixels().end(), out.pixels().begin());
    for (const Entry& e : entries_) {
        double v = e.constant;
        for (int k = 0; k < 4; ++k) v = std::max(v, filtered_intensity(e.scalar[k] > 0.0, e.scalar[k], t[k]));
        out[e.index] = v;
    }
}

Drawing DrawingModel::render(const std::array<double, 4>& t) const {
    Drawing out;
    render_into(t, out);
    return out;
}

std::array<double, 4> DrawingModel::gradient(const std::array<double, 4>& t, const ScalarImage& upstream) const {
    require_same_shape(base_, upstream, "upstream gradient");
    std::array<double, 4> g{0.0, 0.0, 0.0, 0.0};
    for (const Entry& e : entries_) {
        double best = -1.0;
        int winner = 0;
        for (int k = 0; k < 4; ++k) {
            const double v = filtered_intensity(e.scalar[k] > 0.0, e.scalar[k], t[k]);
            if (v >= best) {
                best = v;
                winner = k;
            }
        }
        if (e.constant >= best) continue;
        const double s = e.scalar[winner];
        const double value = 1.0 - t[winner] / s;
        if (!(value > 0.0 && value <= 1.0)) continue;
        g[winner] += upstream[e.index] * (-1.0 / s);
    }
    return g;
}

}  // namespace linedraw
