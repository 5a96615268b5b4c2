#include "linedraw/filter.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "linedraw/parallel.hpp"

namespace linedraw {

ThresholdSet ThresholdSet::from_values(const std::array<double, 4>& v, bool include_boundaries) {
    return ThresholdSet{v[0], v[1], v[2], v[3], include_boundaries};
}

void ThresholdSet::validate() const {
    for (double x : values())
        if (!(x >= 0.0)) throw std::invalid_argument("thresholds must be non-negative");
}

std::string ThresholdSet::to_string() const {
    std::ostringstream out;
    out.precision(17);
    out << "t_S=" << t_s << " t_R=" << t_r << " t_V=" << t_v << " t_A=" << t_a
        << " boundaries=" << (include_boundaries ? "on" : "off");
    return out.str();
}

double filtered_intensity(bool on_mask, double scalar, double threshold) {
    if (!on_mask || !(scalar > 0.0)) return 0.0;
    return std::max(1.0 - threshold / scalar, 0.0);
}

ScalarImage filter_map(const Mask& mask, const ScalarImage& scalar, double threshold) {
    require_same_shape(mask, scalar, "filter mask vs scalar map");
    if (!(threshold >= 0.0)) throw std::invalid_argument("thresholds must be non-negative");
    ScalarImage out(mask.width(), mask.height(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = filtered_intensity(mask[i] != 0, scalar[i], threshold);
    return out;
}

ScalarImage filter_sc(const MapStack& maps, double t_s) { return filter_map(maps.suggestive, maps.dkr, t_s); }

std::pair<ScalarImage, ScalarImage> filter_rv(const MapStack& maps, double t_r, double t_v) {
    return {filter_map(maps.ridge, maps.kmax, t_r), filter_map(maps.valley, maps.kmin, t_v)};
}

ScalarImage filter_ar(const MapStack& maps, double t_a) { return filter_map(maps.apparent, maps.kview, t_a); }

ScalarImage max_images(std::span<const ScalarImage* const> images) {
    if (images.empty()) throw std::invalid_argument("max of no images");
    ScalarImage out = *images[0];
    for (std::size_t k = 1; k < images.size(); ++k) {
        require_same_shape(out, *images[k], "composed maps");
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], (*images[k])[i]);
    }
    return out;
}

ScalarImage mask_to_image(const Mask& mask) {
    ScalarImage out(mask.width(), mask.height(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = mask[i] ? 1.0 : 0.0;
    return out;
}

Drawing compose(const MapStack& maps, const ThresholdSet& t) {
    maps.validate();
    t.validate();
    const ScalarImage s = filter_sc(maps, t.t_s);
    auto [r, v] = filter_rv(maps, t.t_r, t.t_v);
    const ScalarImage a = filter_ar(maps, t.t_a);
    const ScalarImage c = mask_to_image(maps.contour);
    if (t.include_boundaries) {
        const ScalarImage b = mask_to_image(maps.boundary);
        const ScalarImage* parts[] = {&s, &r, &v, &a, &c, &b};
        return max_images(parts);
    }
    const ScalarImage* parts[] = {&s, &r, &v, &a, &c};
    return max_images(parts);
}

Drawing merge_external(const Drawing& geometric, const std::optional<Drawing>& external) {
    if (!external) return geometric;
    require_same_shape(geometric, *external, "geometric drawing vs external line image");
    Drawing out = geometric;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], (*external)[i]);
    return out;
}

FilterGradient grad_thresholds(const MapStack& maps, const ThresholdSet& t, const ScalarImage& upstream,
                               const std::optional<Drawing>& external) {
    maps.validate();
    t.validate();
    const ScalarImage shape(maps.width, maps.height);
    require_same_shape(shape, upstream, "upstream gradient");
    if (external) require_same_shape(shape, *external, "external line image");

    const Mask* masks[4] = {&maps.suggestive, &maps.ridge, &maps.valley, &maps.apparent};
    const ScalarImage* scalars[4] = {&maps.dkr, &maps.kmax, &maps.kmin, &maps.kview};
    const auto th = t.values();

    // Fixed-order reduction over row chunks keeps the sum deterministic.
    const std::size_t n = upstream.size();
    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(64, n / 4096 + 1));
    std::vector<std::array<double, 4>> partial(chunks, {0.0, 0.0, 0.0, 0.0});
    parallel_for(chunks, [&](std::size_t c) {
        const std::size_t begin = n * c / chunks, end = n * (c + 1) / chunks;
        for (std::size_t i = begin; i < end; ++i) {
            double best = -1.0;
            int winner = -1;  // 0..3 filtered kinds, 4 for any constant map
            for (int k = 0; k < 4; ++k) {
                const double v = filtered_intensity((*masks[k])[i] != 0, (*scalars[k])[i], th[k]);
                if (v >= best) {
                    best = v;
                    winner = k;
                }
            }
            double constant = maps.contour[i] ? 1.0 : 0.0;
            if (t.include_boundaries && maps.boundary[i]) constant = 1.0;
            if (external) constant = std::max(constant, (*external)[i]);
            if (constant >= best) continue;
            const double s = (*scalars[winner])[i];
            const double value = 1.0 - th[winner] / s;
            if (!(value > 0.0 && value <= 1.0)) continue;
            partial[c][winner] += upstream[i] * (-1.0 / s);
        }
    });
    std::array<double, 4> total{0.0, 0.0, 0.0, 0.0};
    for (const auto& p : partial)
        for (int k = 0; k < 4; ++k) total[k] += p[k];
    return FilterGradient{total[0], total[1], total[2], total[3]};
}

}  // namespace linedraw
