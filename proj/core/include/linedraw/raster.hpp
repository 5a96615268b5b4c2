#pragma once

#include <array>
#include <limits>
#include <span>
#include <vector>

#include "linedraw/camera.hpp"
#include "linedraw/image.hpp"
#include "linedraw/lines.hpp"
#include "linedraw/mesh.hpp"

namespace linedraw {

/// Triangle z-buffer: per-pixel view-space depth of the nearest surface and
/// the face that produced it. Background pixels hold +inf and face -1.
struct DepthBuffer {
    int width = 0;
    int height = 0;
    std::vector<double> depth;
    std::vector<int> face;
    double zmin = std::numeric_limits<double>::infinity();
    double zmax = -std::numeric_limits<double>::infinity();

    [[nodiscard]] bool covered(int x, int y) const { return face[static_cast<std::size_t>(y) * width + x] >= 0; }
    [[nodiscard]] bool empty() const { return !(zmax >= zmin); }
};

/// Rasterizes every triangle (front and back facing) with a top-left fill
/// rule at pixel centres. Triangles reaching behind the camera are skipped.
DepthBuffer render_zbuffer(const TriangleMesh& mesh, const Camera& camera);

/// Depth image E: 1 at the nearest foreground depth, 0.1 at the farthest,
/// 0 on the background.
ScalarImage depth_image(const DepthBuffer& buffer);
ScalarImage render_depth(const TriangleMesh& mesh, const Camera& camera);

/// Lambertian shading with the light at the camera: max(0, n.l) per vertex,
/// interpolated perspective-correctly over the visible triangle.
ScalarImage render_shaded(const TriangleMesh& mesh, const Camera& camera, std::span<const Vec3> normals);
ScalarImage render_shaded(const TriangleMesh& mesh, const Camera& camera, const DepthBuffer& buffer,
                          std::span<const Vec3> normals);

inline constexpr std::array<double, 6> shaded_stack_sigmas = {0.0, 1.0, 2.0, 3.0, 4.0, 5.0};

/// Six shaded images under normal smoothing sigma = 0, 1, ..., 5.
std::array<ScalarImage, 6> render_shaded_stack(const TriangleMesh& mesh, const Camera& camera);
std::array<ScalarImage, 6> render_shaded_stack(const TriangleMesh& mesh, const Camera& camera,
                                               const DepthBuffer& buffer);

struct LineRasterOptions {
    /// Pixels whose centre lies within width/2 of the projected segment are stamped.
    double line_width = 1.0;
    /// Visibility tolerance as a fraction of the foreground depth range.
    double depth_bias = 1e-3;
};

struct LineRaster {
    Mask mask;
    /// Max of the interpolated segment scalars; positive exactly where mask is set.
    ScalarImage scalar;
};

/// A line sample at depth z is visible when z <= (farthest depth in the 3x3
/// z-buffer neighbourhood) + bias * (zmax - zmin). Only samples with a
/// positive scalar are stamped.
LineRaster rasterize_lines(const Segments& segments, const Camera& camera, const DepthBuffer& buffer,
                           const LineRasterOptions& options = {});
LineRaster rasterize_lines(const Segments& segments, const TriangleMesh& mesh, const Camera& camera,
                           const LineRasterOptions& options = {});

/// Canny edges of a [0,1] image: Gaussian blur (sigma in pixels), Sobel,
/// non-maximum suppression and hysteresis. Thresholds are gradient
/// magnitudes in [0,1] intensity units; infinite thresholds give no edges.
Drawing canny_lines(const ScalarImage& image, double low, double high, double sigma = 1.0);

}  // namespace linedraw
