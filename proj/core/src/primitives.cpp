#include "linedraw/primitives.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace linedraw::primitives {

namespace {

constexpr double pi = std::numbers::pi;

void require_positive(int value, const char* what) {
    if (value <= 0) throw std::invalid_argument(std::string(what) + " must be positive");
}

}  // namespace

TriangleMesh icosphere(int subdivisions, double radius) {
    if (subdivisions < 0) throw std::invalid_argument("subdivisions must be non-negative");
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                           {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (Vec3& p : v) p.normalize();
    std::vector<Face> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                           {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                           {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            v.push_back((v[a] + v[b]).normalized());
            const int index = static_cast<int>(v.size()) - 1;
            midpoint.emplace(key, index);
            return index;
        };
        std::vector<Face> next;
        next.reserve(f.size() * 4);
        for (const Face& tri : f) {
            const int a = mid(tri[0], tri[1]), b = mid(tri[1], tri[2]), c = mid(tri[2], tri[0]);
            next.push_back({tri[0], a, c});
            next.push_back({tri[1], b, a});
            next.push_back({tri[2], c, b});
            next.push_back({a, b, c});
        }
        f = std::move(next);
    }
    TriangleMesh mesh;
    mesh.normals = v;
    for (Vec3& p : v) p *= radius;
    mesh.vertices = std::move(v);
    mesh.faces = std::move(f);
    return mesh;
}

TriangleMesh cylinder(double radius, double height, int radial_segments, int height_segments) {
    require_positive(radial_segments, "radial_segments");
    require_positive(height_segments, "height_segments");
    TriangleMesh mesh;
    for (int j = 0; j <= height_segments; ++j) {
        const double y = -height / 2 + height * j / height_segments;
        for (int i = 0; i < radial_segments; ++i) {
            const double a = 2 * pi * i / radial_segments;
            mesh.vertices.emplace_back(radius * std::cos(a), y, -radius * std::sin(a));
            mesh.normals.emplace_back(std::cos(a), 0.0, -std::sin(a));
        }
    }
    for (int j = 0; j < height_segments; ++j) {
        for (int i = 0; i < radial_segments; ++i) {
            const int i1 = (i + 1) % radial_segments;
            const int a = j * radial_segments + i, b = j * radial_segments + i1;
            const int c = (j + 1) * radial_segments + i, d = (j + 1) * radial_segments + i1;
            mesh.faces.push_back({a, b, d});
            mesh.faces.push_back({a, d, c});
        }
    }
    return mesh;
}

TriangleMesh torus(double major, double minor, int major_segments, int minor_segments) {
    require_positive(major_segments, "major_segments");
    require_positive(minor_segments, "minor_segments");
    TriangleMesh mesh;
    for (int i = 0; i < major_segments; ++i) {
        const double u = 2 * pi * i / major_segments;
        const Vec3 radial(std::cos(u), 0.0, -std::sin(u));
        for (int j = 0; j < minor_segments; ++j) {
            const double w = 2 * pi * j / minor_segments;
            const Vec3 n = std::cos(w) * radial + std::sin(w) * Vec3::UnitY();
            mesh.vertices.push_back(major * radial + minor * n);
            mesh.normals.push_back(n);
        }
    }
    for (int i = 0; i < major_segments; ++i) {
        const int i1 = (i + 1) % major_segments;
        for (int j = 0; j < minor_segments; ++j) {
            const int j1 = (j + 1) % minor_segments;
            const int a = i * minor_segments + j, b = i1 * minor_segments + j;
            const int c = i * minor_segments + j1, d = i1 * minor_segments + j1;
            mesh.faces.push_back({a, b, d});
            mesh.faces.push_back({a, d, c});
        }
    }
    return mesh;
}

TriangleMesh height_field(int nx, int ny, double size, const std::function<double(double, double)>& height) {
    require_positive(nx, "nx");
    require_positive(ny, "ny");
    TriangleMesh mesh;
    for (int j = 0; j <= ny; ++j) {
        for (int i = 0; i <= nx; ++i) {
            const double x = -size / 2 + size * i / nx;
            const double y = -size / 2 + size * j / ny;
            mesh.vertices.emplace_back(x, y, height ? height(x, y) : 0.0);
        }
    }
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int a = j * (nx + 1) + i, b = a + 1, c = a + nx + 1, d = c + 1;
            mesh.faces.push_back({a, b, d});
            mesh.faces.push_back({a, d, c});
        }
    }
    mesh.normals = area_weighted_normals(mesh.vertices, mesh.faces);
    return mesh;
}

TriangleMesh grid(int nx, int ny, double size) {
    TriangleMesh mesh = height_field(nx, ny, size, nullptr);
    mesh.normals.assign(mesh.vertices.size(), Vec3::UnitZ());
    return mesh;
}

TriangleMesh cube(double side) {
    const double h = side / 2;
    TriangleMesh mesh;
    for (int k = 0; k < 8; ++k) mesh.vertices.emplace_back(k & 1 ? h : -h, k & 2 ? h : -h, k & 4 ? h : -h);
    mesh.faces = {{0, 2, 3}, {0, 3, 1}, {4, 5, 7}, {4, 7, 6}, {0, 1, 5}, {0, 5, 4},
                  {2, 6, 7}, {2, 7, 3}, {0, 4, 6}, {0, 6, 2}, {1, 3, 7}, {1, 7, 5}};
    mesh.normals = area_weighted_normals(mesh.vertices, mesh.faces);
    return mesh;
}

TriangleMesh rounded_cube(double side, double radius, int resolution) {
    require_positive(resolution, "resolution");
    if (radius < 0 || 2 * radius > side) throw std::invalid_argument("rounding radius out of range");
    const double h = side / 2;
    const double inner = h - radius;
    TriangleMesh raw;
    // Six face grids; (axis, sign) picks the face, u/v span the other two axes.
    for (int axis = 0; axis < 3; ++axis) {
        for (int sign : {-1, 1}) {
            const int ua = (axis + 1) % 3, va = (axis + 2) % 3;
            const int base = static_cast<int>(raw.vertices.size());
            for (int j = 0; j <= resolution; ++j) {
                for (int i = 0; i <= resolution; ++i) {
                    Vec3 p;
                    p[axis] = sign * h;
                    p[ua] = -h + side * i / resolution;
                    p[va] = -h + side * j / resolution;
                    raw.vertices.push_back(p);
                }
            }
            for (int j = 0; j < resolution; ++j) {
                for (int i = 0; i < resolution; ++i) {
                    const int a = base + j * (resolution + 1) + i, b = a + 1, c = a + resolution + 1, d = c + 1;
                    if (sign > 0) {
                        raw.faces.push_back({a, b, d});
                        raw.faces.push_back({a, d, c});
                    } else {
                        raw.faces.push_back({a, d, b});
                        raw.faces.push_back({a, c, d});
                    }
                }
            }
        }
    }
    TriangleMesh mesh = weld_vertices(raw, 1e-9 * side);
    for (Vec3& p : mesh.vertices) {
        const Vec3 core = p.cwiseMax(Vec3::Constant(-inner)).cwiseMin(Vec3::Constant(inner));
        const Vec3 offset = p - core;
        const double len = offset.norm();
        if (len > 0) p = core + radius * offset / len;
    }
    mesh.normals = area_weighted_normals(mesh.vertices, mesh.faces);
    return mesh;
}

TriangleMesh remove_faces(const TriangleMesh& mesh, const std::function<bool(const Vec3&)>& drop) {
    std::vector<int> remap(mesh.vertices.size(), -1);
    TriangleMesh out;
    out.up_axis = mesh.up_axis;
    std::vector<Face> kept;
    for (const Face& f : mesh.faces) {
        const Vec3 c = (mesh.vertices[f[0]] + mesh.vertices[f[1]] + mesh.vertices[f[2]]) / 3.0;
        if (!drop(c)) kept.push_back(f);
    }
    for (Face& f : kept) {
        for (int& v : f) {
            if (remap[v] < 0) {
                remap[v] = static_cast<int>(out.vertices.size());
                out.vertices.push_back(mesh.vertices[v]);
                if (mesh.normals.size() == mesh.vertices.size()) out.normals.push_back(mesh.normals[v]);
            }
            v = remap[v];
        }
    }
    out.faces = std::move(kept);
    if (out.normals.size() != out.vertices.size()) out.normals = area_weighted_normals(out.vertices, out.faces);
    return out;
}

TriangleMesh transformed(const TriangleMesh& mesh, const Eigen::Matrix3d& rotation, const Vec3& translation,
                         double scale) {
    TriangleMesh out = mesh;
    for (Vec3& p : out.vertices) p = scale * (rotation * p) + translation;
    for (Vec3& n : out.normals) n = (rotation * n).normalized();
    if (out.up_axis) out.up_axis = (rotation * *out.up_axis).normalized();
    return out;
}

}  // namespace linedraw::primitives
