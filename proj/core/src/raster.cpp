#include "linedraw/raster.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <opencv2/imgproc.hpp>

#include "linedraw/parallel.hpp"

namespace linedraw {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Row bands processed independently; each band only writes its own rows.
template <typename Body>
void for_row_bands(int height, Body&& body) {
    const int bands = std::clamp(height / 16, 1, 64);
    parallel_for(static_cast<std::size_t>(bands), [&](std::size_t b) {
        const int y0 = static_cast<int>(static_cast<long long>(height) * static_cast<long long>(b) / bands);
        const int y1 = static_cast<int>(static_cast<long long>(height) * static_cast<long long>(b + 1) / bands);
        body(y0, y1);
    });
}

// Edge function of (a, b) at p, positive when p is left of a->b in y-down
// screen space. Evaluated from the lexicographically smaller endpoint so the
// two triangles sharing an edge get exactly opposite values (no cracks).
double edge(double ax, double ay, double bx, double by, double px, double py) {
    if (ax < bx || (ax == bx && ay < by)) return (bx - ax) * (py - ay) - (by - ay) * (px - ax);
    return -((ax - bx) * (py - by) - (ay - by) * (px - bx));
}

// Top-left rule for a triangle with positive orientation in edge() terms.
bool top_left(double ax, double ay, double bx, double by) {
    const double dx = bx - ax, dy = by - ay;
    return (dy == 0.0 && dx > 0.0) || dy < 0.0;
}

// Perspective-correct barycentrics of the ray through pixel centre (px, py)
// against a triangle, via the view-space plane intersection.
std::array<double, 3> ray_barycentrics(const Projector& proj, const std::array<Vec3, 3>& view, double px, double py) {
    const Camera& cam = proj.camera();
    const double f = proj.focal_pixels();
    const Vec3 dir((px - 0.5 * cam.width) / f, -(py - 0.5 * cam.height) / f, 1.0);
    const Vec3 e1 = view[1] - view[0];
    const Vec3 e2 = view[2] - view[0];
    const Vec3 n = e1.cross(e2);
    const double denom = n.dot(dir);
    if (denom == 0.0) return {1.0 / 3, 1.0 / 3, 1.0 / 3};
    const double s = n.dot(view[0]) / denom;
    const Vec3 p = s * dir;
    const double area = n.squaredNorm();
    const double b1 = n.dot((p - view[0]).cross(e2)) / area;
    const double b2 = n.dot(e1.cross(p - view[0])) / area;
    return {1.0 - b1 - b2, b1, b2};
}

}  // namespace

DepthBuffer render_zbuffer(const TriangleMesh& mesh, const Camera& camera) {
    const Projector proj(camera);
    DepthBuffer buf;
    buf.width = camera.width;
    buf.height = camera.height;
    buf.depth.assign(static_cast<std::size_t>(camera.width) * camera.height, inf);
    buf.face.assign(buf.depth.size(), -1);

    std::vector<ScreenPoint> screen(mesh.vertices.size());
    for (std::size_t i = 0; i < screen.size(); ++i) screen[i] = proj.project(mesh.vertices[i]);

    for_row_bands(camera.height, [&](int y0, int y1) {
        for (std::size_t fi = 0; fi < mesh.faces.size(); ++fi) {
            const Face& f = mesh.faces[fi];
            ScreenPoint a = screen[f[0]], b = screen[f[1]], c = screen[f[2]];
            if (a.depth <= proj.near_depth() || b.depth <= proj.near_depth() || c.depth <= proj.near_depth()) continue;
            double area = edge(a.x, a.y, b.x, b.y, c.x, c.y);
            if (area == 0.0 || !std::isfinite(area)) continue;
            if (area < 0.0) {
                std::swap(b, c);
                area = -area;
            }
            const int xmin = std::max(0, static_cast<int>(std::floor(std::min({a.x, b.x, c.x}) - 0.5)));
            const int xmax = std::min(camera.width - 1, static_cast<int>(std::ceil(std::max({a.x, b.x, c.x}) - 0.5)));
            const int ymin = std::max(y0, static_cast<int>(std::floor(std::min({a.y, b.y, c.y}) - 0.5)));
            const int ymax = std::min(y1 - 1, static_cast<int>(std::ceil(std::max({a.y, b.y, c.y}) - 0.5)));
            if (xmin > xmax || ymin > ymax) continue;
            const bool tl0 = top_left(b.x, b.y, c.x, c.y);
            const bool tl1 = top_left(c.x, c.y, a.x, a.y);
            const bool tl2 = top_left(a.x, a.y, b.x, b.y);
            for (int y = ymin; y <= ymax; ++y) {
                const double py = y + 0.5;
                for (int x = xmin; x <= xmax; ++x) {
                    const double px = x + 0.5;
                    const double w0 = edge(b.x, b.y, c.x, c.y, px, py);
                    const double w1 = edge(c.x, c.y, a.x, a.y, px, py);
                    const double w2 = edge(a.x, a.y, b.x, b.y, px, py);
                    if (w0 < 0.0 || w1 < 0.0 || w2 < 0.0) continue;
                    if ((w0 == 0.0 && !tl0) || (w1 == 0.0 && !tl1) || (w2 == 0.0 && !tl2)) continue;
                    const double inv_z = (w0 / a.depth + w1 / b.depth + w2 / c.depth) / area;
                    const double z = 1.0 / inv_z;
                    const std::size_t idx = static_cast<std::size_t>(y) * camera.width + x;
                    if (z < buf.depth[idx]) {
                        buf.depth[idx] = z;
                        buf.face[idx] = static_cast<int>(fi);
                    }
                }
            }
        }
    });

    for (std::size_t i = 0; i < buf.depth.size(); ++i) {
        if (buf.face[i] < 0) continue;
        buf.zmin = std::min(buf.zmin, buf.depth[i]);
        buf.zmax = std::max(buf.zmax, buf.depth[i]);
    }
    return buf;
}

ScalarImage depth_image(const DepthBuffer& buffer) {
    ScalarImage e(buffer.width, buffer.height, 0.0);
    if (buffer.empty()) return e;
    // A range at rounding level (a plane facing the camera) counts as constant depth.
    double range = buffer.zmax - buffer.zmin;
    if (range <= 1e-9 * std::max(1.0, std::abs(buffer.zmax))) range = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (buffer.face[i] < 0) continue;
        e[i] = range > 0.0 ? 1.0 - 0.9 * (buffer.depth[i] - buffer.zmin) / range : 1.0;
    }
    return e;
}

ScalarImage render_depth(const TriangleMesh& mesh, const Camera& camera) {
    return depth_image(render_zbuffer(mesh, camera));
}

ScalarImage render_shaded(const TriangleMesh& mesh, const Camera& camera, const DepthBuffer& buffer,
                          std::span<const Vec3> normals) {
    if (normals.size() != mesh.vertices.size()) throw std::invalid_argument("normal field does not match mesh");
    if (buffer.width != camera.width || buffer.height != camera.height)
        throw std::invalid_argument("dimension mismatch: depth buffer vs camera");
    const Projector proj(camera);
    std::vector<double> shade(mesh.vertices.size());
    for (std::size_t i = 0; i < shade.size(); ++i) {
        const Vec3 l = (camera.position - mesh.vertices[i]).normalized();
        shade[i] = std::max(0.0, normals[i].dot(l));
    }
    ScalarImage out(camera.width, camera.height, 0.0);
    for_row_bands(camera.height, [&](int y0, int y1) {
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < camera.width; ++x) {
                const std::size_t idx = static_cast<std::size_t>(y) * camera.width + x;
                const int fi = buffer.face[idx];
                if (fi < 0) continue;
                const Face& f = mesh.faces[fi];
                const std::array<Vec3, 3> view{proj.to_view(mesh.vertices[f[0]]), proj.to_view(mesh.vertices[f[1]]),
                                               proj.to_view(mesh.vertices[f[2]])};
                auto bary = ray_barycentrics(proj, view, x + 0.5, y + 0.5);
                for (double& w : bary) w = std::clamp(w, 0.0, 1.0);
                const double sum = bary[0] + bary[1] + bary[2];
                const double value = (bary[0] * shade[f[0]] + bary[1] * shade[f[1]] + bary[2] * shade[f[2]]) / sum;
                out[idx] = std::clamp(value, 0.0, 1.0);
            }
        }
    });
    return out;
}

ScalarImage render_shaded(const TriangleMesh& mesh, const Camera& camera, std::span<const Vec3> normals) {
    return render_shaded(mesh, camera, render_zbuffer(mesh, camera), normals);
}

std::array<ScalarImage, 6> render_shaded_stack(const TriangleMesh& mesh, const Camera& camera,
                                               const DepthBuffer& buffer) {
    std::array<ScalarImage, 6> stack;
    for (std::size_t i = 0; i < stack.size(); ++i) {
        const NormalField field = smooth_normals(mesh, shaded_stack_sigmas[i]);
        stack[i] = render_shaded(mesh, camera, buffer, field.normals);
    }
    return stack;
}

std::array<ScalarImage, 6> render_shaded_stack(const TriangleMesh& mesh, const Camera& camera) {
    return render_shaded_stack(mesh, camera, render_zbuffer(mesh, camera));
}

LineRaster rasterize_lines(const Segments& segments, const Camera& camera, const DepthBuffer& buffer,
                           const LineRasterOptions& options) {
    if (buffer.width != camera.width || buffer.height != camera.height)
        throw std::invalid_argument("dimension mismatch: depth buffer vs camera");
    const Projector proj(camera);
    const int w = camera.width, h = camera.height;
    LineRaster out{Mask(w, h, 0), ScalarImage(w, h, 0.0)};
    const double half = 0.5 * options.line_width;
    const double bias = buffer.empty() ? 0.0 : options.depth_bias * (buffer.zmax - buffer.zmin);

    struct Projected {
        ScreenPoint a, b;
        double s0, s1;
    };
    std::vector<Projected> projected;
    projected.reserve(segments.size());
    for (const auto& s : segments) {
        const ScreenPoint a = proj.project(s.p[0]);
        const ScreenPoint b = proj.project(s.p[1]);
        if (a.depth <= proj.near_depth() || b.depth <= proj.near_depth()) continue;
        projected.push_back({a, b, s.scalar[0], s.scalar[1]});
    }

    // Farthest z-buffer depth in the 3x3 neighbourhood of each pixel.
    std::vector<double> far_depth(static_cast<std::size_t>(w) * h, inf);
    if (!buffer.empty()) {
        for_row_bands(h, [&](int y0, int y1) {
            for (int y = y0; y < y1; ++y)
                for (int x = 0; x < w; ++x) {
                    double m = -inf;
                    for (int dy = -1; dy <= 1; ++dy)
                        for (int dx = -1; dx <= 1; ++dx) {
                            const int xx = x + dx, yy = y + dy;
                            if (xx < 0 || yy < 0 || xx >= w || yy >= h) {
                                m = inf;
                                continue;
                            }
                            m = std::max(m, buffer.depth[static_cast<std::size_t>(yy) * w + xx]);
                        }
                    far_depth[static_cast<std::size_t>(y) * w + x] = m;
                }
        });
    }

    for_row_bands(h, [&](int y0, int y1) {
        for (const Projected& s : projected) {
            const double ymin_f = std::min(s.a.y, s.b.y) - half - 0.5;
            const double ymax_f = std::max(s.a.y, s.b.y) + half - 0.5;
            if (ymax_f < y0 - 1 || ymin_f > y1) continue;
            const int ymin = std::max(y0, static_cast<int>(std::floor(ymin_f)));
            const int ymax = std::min(y1 - 1, static_cast<int>(std::ceil(ymax_f)));
            const int xmin = std::max(0, static_cast<int>(std::floor(std::min(s.a.x, s.b.x) - half - 0.5)));
            const int xmax = std::min(w - 1, static_cast<int>(std::ceil(std::max(s.a.x, s.b.x) + half - 0.5)));
            const double dx = s.b.x - s.a.x, dy = s.b.y - s.a.y;
            const double len2 = dx * dx + dy * dy;
            for (int y = ymin; y <= ymax; ++y) {
                const double py = y + 0.5;
                for (int x = xmin; x <= xmax; ++x) {
                    const double px = x + 0.5;
                    double t = len2 > 0.0 ? ((px - s.a.x) * dx + (py - s.a.y) * dy) / len2 : 0.0;
                    t = std::clamp(t, 0.0, 1.0);
                    const double cx = s.a.x + t * dx - px, cy = s.a.y + t * dy - py;
                    if (cx * cx + cy * cy > half * half) continue;
                    // Screen-space t to the perspective-correct segment parameter.
                    const double inv_z = (1.0 - t) / s.a.depth + t / s.b.depth;
                    const double z = 1.0 / inv_z;
                    const double u = (t / s.b.depth) / inv_z;
                    const double scalar = (1.0 - u) * s.s0 + u * s.s1;
                    if (!(scalar > 0.0)) continue;
                    const std::size_t idx = static_cast<std::size_t>(y) * w + x;
                    if (z > far_depth[idx] + bias) continue;
                    out.mask[idx] = 1;
                    out.scalar[idx] = std::max(out.scalar[idx], scalar);
                }
            }
        }
    });
    return out;
}

LineRaster rasterize_lines(const Segments& segments, const TriangleMesh& mesh, const Camera& camera,
                           const LineRasterOptions& options) {
    return rasterize_lines(segments, camera, render_zbuffer(mesh, camera), options);
}

Drawing canny_lines(const ScalarImage& image, double low, double high, double sigma) {
    if (!(low >= 0.0) || !(high >= low)) throw std::invalid_argument("canny thresholds must satisfy high >= low >= 0");
    Drawing out(image.width(), image.height(), 0.0);
    if (image.empty() || !std::isfinite(low)) return out;
    cv::Mat src(image.height(), image.width(), CV_8UC1);
    for (int y = 0; y < image.height(); ++y)
        for (int x = 0; x < image.width(); ++x)
            src.at<std::uint8_t>(y, x) =
                static_cast<std::uint8_t>(std::lround(std::clamp(image(x, y), 0.0, 1.0) * 255.0));
    cv::Mat blurred = src;
    if (sigma > 0.0) {
        const int k = 2 * static_cast<int>(std::ceil(3.0 * sigma)) + 1;
        cv::GaussianBlur(src, blurred, cv::Size(k, k), sigma, sigma, cv::BORDER_REPLICATE);
    }
    cv::Mat edges;
    const double hi = std::isfinite(high) ? high * 255.0 : std::numeric_limits<double>::max();
    cv::Canny(blurred, edges, low * 255.0, hi, 3, true);
    for (int y = 0; y < image.height(); ++y)
        for (int x = 0; x < image.width(); ++x) out(x, y) = edges.at<std::uint8_t>(y, x) ? 1.0 : 0.0;
    return out;
}

}  // namespace linedraw
