#include "linedraw/map_stack.hpp"

#include <stdexcept>

#include "linedraw/field_io.hpp"

namespace linedraw {

void MapStack::validate() const {
    const ScalarImage shape(width, height);
    for (const Mask* m : {&suggestive, &ridge, &valley, &apparent, &contour, &boundary, &crease})
        require_same_shape(shape, *m, "map stack mask");
    for (const ScalarImage* s : {&dkr, &kmax, &kmin, &kview, &depth}) require_same_shape(shape, *s, "map stack scalar");
    for (const auto& o : shaded) require_same_shape(shape, o, "map stack shaded image");
}

bool MapStack::lines_empty() const {
    for (const Mask* m : {&suggestive, &ridge, &valley, &apparent, &contour, &boundary, &crease})
        for (std::uint8_t v : m->pixels())
            if (v) return false;
    return true;
}

MapStack empty_map_stack(int width, int height) {
    MapStack maps;
    maps.width = width;
    maps.height = height;
    for (Mask* m : {&maps.suggestive, &maps.ridge, &maps.valley, &maps.apparent, &maps.contour, &maps.boundary,
                    &maps.crease})
        *m = Mask(width, height, 0);
    for (ScalarImage* s : {&maps.dkr, &maps.kmax, &maps.kmin, &maps.kview, &maps.depth}) *s = ScalarImage(width, height);
    for (auto& o : maps.shaded) o = ScalarImage(width, height);
    return maps;
}

Segments LineGeometry::all() const {
    Segments out;
    for (const Segments* s : {&contours, &boundaries, &creases, &suggestive, &ridges, &valleys, &apparent})
        out.insert(out.end(), s->begin(), s->end());
    return out;
}

CurvatureField normalized_curvature(const TriangleMesh& mesh) { return normalize_percentile(compute_curvature(mesh)); }

LineGeometry extract_lines(const TriangleMesh& mesh, const CurvatureField& curvature, const Camera& camera,
                           const PipelineOptions& options) {
    camera.validate();
    LineGeometry g;
    g.curvature = curvature;
    const auto dirs = view_directions(mesh, camera.position);
    g.radial = radial_curvature(g.curvature, dirs);
    const ViewDependentField raw = view_dependent_curvature(g.curvature, mesh, camera);
    g.viewdep = options.joint_view_normalization ? normalize_percentile(raw, 1.0) : normalize_percentile(raw);

    g.contours = occluding_contours(mesh, camera.position);
    Segments edges = boundaries_and_creases(mesh, options.crease_angle_degrees);
    g.boundaries = select_kind(edges, LineKind::Boundary);
    g.creases = select_kind(edges, LineKind::Crease);
    g.suggestive = suggestive_contours(mesh, g.radial);
    Segments rv = ridges_valleys(mesh, g.curvature);
    g.ridges = select_kind(rv, LineKind::Ridge);
    g.valleys = select_kind(rv, LineKind::Valley);
    g.apparent = apparent_ridges(mesh, g.curvature, g.viewdep);
    return g;
}

LineGeometry extract_lines(const TriangleMesh& mesh, const Camera& camera, const PipelineOptions& options) {
    return extract_lines(mesh, normalized_curvature(mesh), camera, options);
}

MapStack build_map_stack(const TriangleMesh& mesh, const LineGeometry& lines, const Camera& camera,
                         const PipelineOptions& options) {
    camera.validate();
    const DepthBuffer buffer = render_zbuffer(mesh, camera);
    MapStack maps;
    maps.width = camera.width;
    maps.height = camera.height;

    auto raster = [&](const Segments& s, Mask& mask, ScalarImage* scalar) {
        LineRaster r = rasterize_lines(s, camera, buffer, options.raster);
        mask = std::move(r.mask);
        if (scalar) *scalar = std::move(r.scalar);
    };
    raster(lines.suggestive, maps.suggestive, &maps.dkr);
    raster(lines.ridges, maps.ridge, &maps.kmax);
    raster(lines.valleys, maps.valley, &maps.kmin);
    raster(lines.apparent, maps.apparent, &maps.kview);
    raster(lines.contours, maps.contour, nullptr);
    raster(lines.boundaries, maps.boundary, nullptr);
    raster(lines.creases, maps.crease, nullptr);

    maps.depth = depth_image(buffer);
    maps.shaded = render_shaded_stack(mesh, camera, buffer);
    return maps;
}

MapStack build_map_stack(const TriangleMesh& mesh, const Camera& camera, const PipelineOptions& options) {
    return build_map_stack(mesh, extract_lines(mesh, camera, options), camera, options);
}

void dump_map_stack(const std::filesystem::path& dir, const MapStack& maps) {
    std::filesystem::create_directories(dir);
    auto mask_image = [](const Mask& m) {
        ScalarImage s(m.width(), m.height());
        for (std::size_t i = 0; i < m.size(); ++i) s[i] = m[i];
        return s;
    };
    const std::pair<const char*, const Mask*> masks[] = {{"S", &maps.suggestive}, {"R", &maps.ridge},
                                                         {"V", &maps.valley},     {"A", &maps.apparent},
                                                         {"C", &maps.contour},    {"B", &maps.boundary},
                                                         {"K", &maps.crease}};
    for (const auto& [name, mask] : masks)
        write_flat_floats(dir / (std::string("mask_") + name + ".ldf"), image_to_flat(mask_image(*mask)));
    const std::pair<const char*, const ScalarImage*> scalars[] = {
        {"dkr", &maps.dkr}, {"kmax", &maps.kmax}, {"kmin", &maps.kmin}, {"kview", &maps.kview}, {"E", &maps.depth}};
    for (const auto& [name, image] : scalars)
        write_flat_floats(dir / (std::string(name) + ".ldf"), image_to_flat(*image));
    for (std::size_t i = 0; i < maps.shaded.size(); ++i)
        write_flat_floats(dir / ("O" + std::to_string(i + 1) + ".ldf"), image_to_flat(maps.shaded[i]));
}

}  // namespace linedraw
