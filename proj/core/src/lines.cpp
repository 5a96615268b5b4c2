#include "linedraw/lines.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "linedraw/parallel.hpp"

namespace linedraw {

std::string_view kind_name(LineKind kind) {
    switch (kind) {
        case LineKind::Contour: return "contour";
        case LineKind::Boundary: return "boundary";
        case LineKind::Crease: return "crease";
        case LineKind::Suggestive: return "suggestive";
        case LineKind::Ridge: return "ridge";
        case LineKind::Valley: return "valley";
        case LineKind::Apparent: return "apparent";
    }
    return "unknown";
}

LineKind kind_from_name(std::string_view name) {
    for (LineKind k : all_line_kinds)
        if (kind_name(k) == name) return k;
    throw std::invalid_argument("unknown line kind: " + std::string(name));
}

namespace {

// Runs `extract(face, out)` over all faces; the concatenated output is in face
// order whatever the thread count.
template <typename Extract>
Segments per_face(std::size_t face_count, Extract&& extract) {
    const std::size_t chunks = std::max<std::size_t>(1, std::min<std::size_t>(face_count, 64));
    std::vector<Segments> parts(chunks);
    parallel_for(chunks, [&](std::size_t c) {
        const std::size_t begin = face_count * c / chunks;
        const std::size_t end = face_count * (c + 1) / chunks;
        for (std::size_t f = begin; f < end; ++f) extract(static_cast<int>(f), parts[c]);
    });
    Segments out;
    for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
    return out;
}

void emit(Segments& out, const Vec3& a, const Vec3& b, double sa, double sb, LineKind kind, int face) {
    if ((b - a).norm() < min_segment_length) return;
    out.push_back(LineSegment3D{{a, b}, {sa, sb}, kind, face});
}

// Linear zero crossing on edge (a, b), evaluated with the smaller index first
// so both faces sharing the edge get the same point bit for bit.
struct Crossing {
    Vec3 p;
    double t;  // weight of the larger-index vertex
    int lo;
    int hi;
};

Crossing zero_crossing(const TriangleMesh& mesh, const std::vector<double>& value, int a, int b) {
    if (a > b) std::swap(a, b);
    const double t = value[a] / (value[a] - value[b]);
    return {mesh.vertices[a] + t * (mesh.vertices[b] - mesh.vertices[a]), t, a, b};
}

double interpolate(const Crossing& c, const std::vector<double>& value) {
    return (1.0 - c.t) * value[c.lo] + c.t * value[c.hi];
}

// Interpolation weight of v1 on edge (v0, v1) from derivative magnitudes.
double crossing_weight(double e0, double e1) {
    const double denom = std::abs(e0) + std::abs(e1);
    return denom > 0.0 ? std::abs(e0) / denom : 0.5;
}

struct ExtremumSegment {
    Vec3 p01;
    Vec3 p12;
    double k01;
    double k12;
};

// Segment from the crossing on edge (v0, v1) to the crossing on edge (v1, v2),
// or to the face centre.
ExtremumSegment extremum_segment(const TriangleMesh& mesh, const std::array<int, 3>& v, const std::array<double, 3>& e,
                                 const std::array<double, 3>& k, bool to_center) {
    ExtremumSegment s;
    const double w10 = crossing_weight(e[0], e[1]);
    const double w01 = 1.0 - w10;
    s.p01 = w01 * mesh.vertices[v[0]] + w10 * mesh.vertices[v[1]];
    s.k01 = std::abs(w01 * k[0] + w10 * k[1]);
    if (to_center) {
        s.p12 = (mesh.vertices[v[0]] + mesh.vertices[v[1]] + mesh.vertices[v[2]]) / 3.0;
        s.k12 = std::abs(k[0] + k[1] + k[2]) / 3.0;
    } else {
        const double w21 = crossing_weight(e[1], e[2]);
        const double w12 = 1.0 - w21;
        s.p12 = w12 * mesh.vertices[v[1]] + w21 * mesh.vertices[v[2]];
        s.k12 = std::abs(w12 * k[1] + w21 * k[2]);
    }
    return s;
}

Vec3 face_normal(const TriangleMesh& mesh, int f) {
    const Face& t = mesh.faces[f];
    return (mesh.vertices[t[1]] - mesh.vertices[t[0]]).cross(mesh.vertices[t[2]] - mesh.vertices[t[0]]);
}

// Emits the one or three pieces of an extremum line in a face whose edges
// (0-1, 1-2, 2-0) have the given crossing flags. `accept` may veto a piece.
template <typename Accept>
void emit_extremum(const TriangleMesh& mesh, int face, const std::array<int, 3>& v, const std::array<double, 3>& e,
                   const std::array<double, 3>& k, std::array<bool, 3> z, LineKind kind, Segments& out,
                   Accept&& accept) {
    auto rotate = [&](int r) {
        return std::tuple{std::array<int, 3>{v[r], v[(r + 1) % 3], v[(r + 2) % 3]},
                          std::array<double, 3>{e[r], e[(r + 1) % 3], e[(r + 2) % 3]},
                          std::array<double, 3>{k[r], k[(r + 1) % 3], k[(r + 2) % 3]}, r};
    };
    auto piece = [&](int r, bool to_center) {
        auto [rv, re, rk, rot] = rotate(r);
        const ExtremumSegment s = extremum_segment(mesh, rv, re, rk, to_center);
        if (s.k01 == 0.0 && s.k12 == 0.0) return;
        if (!accept(rot, s, to_center)) return;
        emit(out, s.p01, s.p12, s.k01, s.k12, kind, face);
    };
    // Rotation r relabels the face so that (0,1) and (1,2) are the crossing edges.
    if (!z[0])
        piece(1, false);
    else if (!z[1])
        piece(2, false);
    else if (!z[2])
        piece(0, false);
    else {
        piece(1, true);
        piece(2, true);
        piece(0, true);
    }
}

}  // namespace

Segments occluding_contours(const TriangleMesh& mesh, const Vec3& eye) {
    const std::size_t nv = mesh.vertices.size();
    if (mesh.normals.size() != nv) throw std::invalid_argument("contours require per-vertex normals");
    std::vector<double> g(nv);
    for (std::size_t i = 0; i < nv; ++i) g[i] = mesh.normals[i].dot(eye - mesh.vertices[i]);

    return per_face(mesh.faces.size(), [&](int f, Segments& out) {
        const Face& t = mesh.faces[f];
        const bool s0 = g[t[0]] > 0.0, s1 = g[t[1]] > 0.0, s2 = g[t[2]] > 0.0;
        if (s0 == s1 && s1 == s2) return;
        std::array<Vec3, 2> p;
        int n = 0;
        const bool side[3] = {s0, s1, s2};
        for (int k = 0; k < 3; ++k) {
            const int a = k, b = (k + 1) % 3;
            if (side[a] != side[b]) p[n++] = zero_crossing(mesh, g, t[a], t[b]).p;
        }
        emit(out, p[0], p[1], 1.0, 1.0, LineKind::Contour, f);
    });
}

Segments boundaries_and_creases(const TriangleMesh& mesh, double crease_angle_degrees) {
    const double cos_limit = std::cos(crease_angle_degrees * std::numbers::pi / 180.0);
    Segments out;
    for (const Edge& e : build_edges(mesh)) {
        const Vec3& a = mesh.vertices[e.a];
        const Vec3& b = mesh.vertices[e.b];
        if (e.face_count == 1) {
            emit(out, a, b, 1.0, 1.0, LineKind::Boundary, e.face0);
        } else if (e.face_count == 2) {
            const Vec3 n0 = face_normal(mesh, e.face0).normalized();
            const Vec3 n1 = face_normal(mesh, e.face1).normalized();
            if (n0.dot(n1) < cos_limit) emit(out, a, b, 1.0, 1.0, LineKind::Crease, std::min(e.face0, e.face1));
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const LineSegment3D& x, const LineSegment3D& y) { return x.face < y.face; });
    return out;
}

Segments suggestive_contours(const TriangleMesh& mesh, const RadialCurvature& radial) {
    if (radial.kr.size() != mesh.vertices.size()) throw std::invalid_argument("radial curvature does not match mesh");
    return per_face(mesh.faces.size(), [&](int f, Segments& out) {
        const Face& t = mesh.faces[f];
        if (radial.ndotv[t[0]] <= 0.0 && radial.ndotv[t[1]] <= 0.0 && radial.ndotv[t[2]] <= 0.0) return;
        if (radial.dkr[t[0]] <= 0.0 && radial.dkr[t[1]] <= 0.0 && radial.dkr[t[2]] <= 0.0) return;
        const bool neg[3] = {radial.kr[t[0]] < 0.0, radial.kr[t[1]] < 0.0, radial.kr[t[2]] < 0.0};
        if (neg[0] == neg[1] && neg[1] == neg[2]) return;
        std::array<Crossing, 2> c;
        int n = 0;
        for (int k = 0; k < 3; ++k) {
            const int a = k, b = (k + 1) % 3;
            if (neg[a] != neg[b]) c[n++] = zero_crossing(mesh, radial.kr, t[a], t[b]);
        }
        const double d0 = interpolate(c[0], radial.dkr);
        const double d1 = interpolate(c[1], radial.dkr);
        if (d0 > 0.0 && d1 > 0.0) emit(out, c[0].p, c[1].p, d0, d1, LineKind::Suggestive, f);
    });
}

Segments ridges_valleys(const TriangleMesh& mesh, const CurvatureField& field) {
    if (!field.has_derivative() || field.size() != mesh.vertices.size())
        throw std::invalid_argument("ridges require a curvature field with derivatives");

    auto extract = [&](bool ridge) {
        const double rv_sign = ridge ? 1.0 : -1.0;
        return per_face(mesh.faces.size(), [&, ridge, rv_sign](int f, Segments& out) {
            const Face& t = mesh.faces[f];
            std::array<int, 3> v{t[0], t[1], t[2]};
            std::array<double, 3> e, k;
            std::array<Vec3, 3> tmax;
            for (int j = 0; j < 3; ++j) {
                const int i = v[j];
                const double k1 = field.k1[i], k2 = field.k2[i];
                if (ridge ? !(k1 > std::abs(k2)) : !(k2 < -std::abs(k1))) return;
                if (k1 - k2 <= umbilic_tolerance * (std::abs(k1) + std::abs(k2))) return;
                e[j] = ridge ? field.dcurv[i][0] : field.dcurv[i][3];
                k[j] = ridge ? k1 : k2;
                // Principal direction flipped towards increasing |curvature|.
                tmax[j] = rv_sign * e[j] * (ridge ? field.e1[i] : field.e2[i]);
            }
            std::array<bool, 3> z{tmax[0].dot(tmax[1]) <= 0.0, tmax[1].dot(tmax[2]) <= 0.0,
                                  tmax[2].dot(tmax[0]) <= 0.0};
            if (z[0] + z[1] + z[2] < 2) return;
            // Maximum test: along a crossing edge, the curvature must rise
            // towards the crossing from at least one end.
            const Vec3& p0 = mesh.vertices[v[0]];
            const Vec3& p1 = mesh.vertices[v[1]];
            const Vec3& p2 = mesh.vertices[v[2]];
            z[0] = z[0] && (tmax[0].dot(p1 - p0) >= 0.0 || tmax[1].dot(p1 - p0) <= 0.0);
            z[1] = z[1] && (tmax[1].dot(p2 - p1) >= 0.0 || tmax[2].dot(p2 - p1) <= 0.0);
            z[2] = z[2] && (tmax[2].dot(p0 - p2) >= 0.0 || tmax[0].dot(p0 - p2) <= 0.0);
            if (z[0] + z[1] + z[2] < 2) return;
            emit_extremum(mesh, f, v, e, k, z, ridge ? LineKind::Ridge : LineKind::Valley, out,
                          [](int, const ExtremumSegment&, bool) { return true; });
        });
    };
    Segments out = extract(true);
    Segments valleys = extract(false);
    out.insert(out.end(), valleys.begin(), valleys.end());
    return out;
}

Segments apparent_ridges(const TriangleMesh& mesh, const CurvatureField& field, const ViewDependentField& viewdep) {
    if (viewdep.kt.size() != mesh.vertices.size() || field.size() != mesh.vertices.size())
        throw std::invalid_argument("view-dependent curvature does not match mesh");
    return per_face(mesh.faces.size(), [&](int f, Segments& out) {
        const Face& t = mesh.faces[f];
        if (viewdep.ndotv[t[0]] <= 0.0 && viewdep.ndotv[t[1]] <= 0.0 && viewdep.ndotv[t[2]] <= 0.0) return;
        std::array<int, 3> v{t[0], t[1], t[2]};
        std::array<Vec3, 3> dir;
        std::array<double, 3> e, k;
        for (int j = 0; j < 3; ++j) {
            const int i = v[j];
            dir[j] = viewdep.direction[i].x() * field.e1[i] + viewdep.direction[i].y() * field.e2[i];
            e[j] = viewdep.derivative[i];
            k[j] = viewdep.kt[i];
        }
        // The direction is defined up to sign; align to the first vertex and
        // flip the derivative with it.
        for (int j = 1; j < 3; ++j) {
            if (dir[0].dot(dir[j]) < 0.0) {
                dir[j] = -dir[j];
                e[j] = -e[j];
            }
        }
        const std::array<bool, 3> z{e[0] * e[1] <= 0.0, e[1] * e[2] <= 0.0, e[2] * e[0] <= 0.0};
        if (z[0] + z[1] + z[2] < 2) return;

        const Vec3 fn = face_normal(mesh, f);
        // Maximum test: the ascent direction e*dir at each vertex must point
        // towards the segment.
        auto accept = [&](int rot, const ExtremumSegment& s, bool to_center) {
            const Vec3 perp = fn.cross(s.p01 - s.p12);
            const int count = to_center ? 2 : 3;
            for (int j = 0; j < count; ++j) {
                const int idx = (rot + j) % 3;
                const double side = perp.dot(mesh.vertices[v[idx]] - s.p01);
                const double ascent = e[idx] * dir[idx].dot(perp);
                if (!(side * ascent < 0.0)) return false;
            }
            return true;
        };
        emit_extremum(mesh, f, v, e, k, z, LineKind::Apparent, out, accept);
    });
}

Segments select_kind(const Segments& segments, LineKind kind) {
    Segments out;
    for (const auto& s : segments)
        if (s.kind == kind) out.push_back(s);
    return out;
}

void write_segments(std::ostream& out, const Segments& segments) {
    const auto precision = out.precision(9);
    for (const auto& s : segments) {
        out << kind_name(s.kind);
        for (int k = 0; k < 2; ++k) out << ' ' << s.p[k].x() << ' ' << s.p[k].y() << ' ' << s.p[k].z() << ' ' << s.scalar[k];
        out << '\n';
    }
    out.precision(precision);
}

void write_segments(const std::filesystem::path& path, const Segments& segments) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write segments: " + path.string());
    write_segments(out, segments);
}

}  // namespace linedraw
