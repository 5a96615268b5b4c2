#include "linedraw/curvature.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "linedraw/field_io.hpp"
#include "linedraw/parallel.hpp"

namespace linedraw {

namespace {

constexpr int next(int j) { return (j + 1) % 3; }
constexpr int prev(int j) { return (j + 2) % 3; }

Vec3 any_perpendicular(const Vec3& n) {
    const Vec3 ref = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    return n.cross(ref).normalized();
}

// Rotates the frame (old_u, old_v) so that its normal becomes new_norm.
void rot_coord_sys(const Vec3& old_u, const Vec3& old_v, const Vec3& new_norm, Vec3& new_u, Vec3& new_v) {
    new_u = old_u;
    new_v = old_v;
    const Vec3 old_norm = old_u.cross(old_v);
    const double ndot = old_norm.dot(new_norm);
    if (ndot <= -1.0) {
        new_u = -new_u;
        new_v = -new_v;
        return;
    }
    const Vec3 perp_old = new_norm - ndot * old_norm;
    const Vec3 dperp = (old_norm + new_norm) / (1.0 + ndot);
    new_u -= dperp * new_u.dot(perp_old);
    new_v -= dperp * new_v.dot(perp_old);
}

// Re-expresses the second fundamental form (ku, kuv, kv) given in frame
// (old_u, old_v) in the frame (new_u, new_v).
void proj_curv(const Vec3& old_u, const Vec3& old_v, double old_ku, double old_kuv, double old_kv, const Vec3& new_u,
               const Vec3& new_v, double& new_ku, double& new_kuv, double& new_kv) {
    Vec3 r_new_u, r_new_v;
    rot_coord_sys(new_u, new_v, old_u.cross(old_v), r_new_u, r_new_v);
    const double u1 = r_new_u.dot(old_u), v1 = r_new_u.dot(old_v);
    const double u2 = r_new_v.dot(old_u), v2 = r_new_v.dot(old_v);
    new_ku = old_ku * u1 * u1 + old_kuv * (2.0 * u1 * v1) + old_kv * v1 * v1;
    new_kuv = old_ku * u1 * u2 + old_kuv * (u1 * v2 + u2 * v1) + old_kv * v1 * v2;
    new_kv = old_ku * u2 * u2 + old_kuv * (2.0 * u2 * v2) + old_kv * v2 * v2;
}

// Same for the symmetric third-order tensor.
std::array<double, 4> proj_dcurv(const Vec3& old_u, const Vec3& old_v, const std::array<double, 4>& c,
                                 const Vec3& new_u, const Vec3& new_v) {
    Vec3 r_new_u, r_new_v;
    rot_coord_sys(new_u, new_v, old_u.cross(old_v), r_new_u, r_new_v);
    const double u1 = r_new_u.dot(old_u), v1 = r_new_u.dot(old_v);
    const double u2 = r_new_v.dot(old_u), v2 = r_new_v.dot(old_v);
    std::array<double, 4> out;
    out[0] = c[0] * u1 * u1 * u1 + c[1] * 3.0 * u1 * u1 * v1 + c[2] * 3.0 * u1 * v1 * v1 + c[3] * v1 * v1 * v1;
    out[1] = c[0] * u1 * u1 * u2 + c[1] * (u1 * u1 * v2 + 2.0 * u2 * u1 * v1) +
             c[2] * (u2 * v1 * v1 + 2.0 * u1 * v1 * v2) + c[3] * v1 * v1 * v2;
    out[2] = c[0] * u1 * u2 * u2 + c[1] * (u2 * u2 * v1 + 2.0 * u1 * u2 * v2) +
             c[2] * (u1 * v2 * v2 + 2.0 * u2 * v2 * v1) + c[3] * v1 * v2 * v2;
    out[3] = c[0] * u2 * u2 * u2 + c[1] * 3.0 * u2 * u2 * v2 + c[2] * 3.0 * u2 * v2 * v2 + c[3] * v2 * v2 * v2;
    return out;
}

// Jacobi rotation of the 2x2 form; output is ordered k1 >= k2.
void diagonalize_curv(const Vec3& old_u, const Vec3& old_v, double ku, double kuv, double kv, const Vec3& new_norm,
                      Vec3& pdir1, Vec3& pdir2, double& k1, double& k2) {
    Vec3 r_old_u, r_old_v;
    rot_coord_sys(old_u, old_v, new_norm, r_old_u, r_old_v);
    double c = 1.0, s = 0.0, tt = 0.0;
    if (kuv != 0.0) {
        const double h = 0.5 * (kv - ku) / kuv;
        tt = h < 0.0 ? 1.0 / (h - std::sqrt(1.0 + h * h)) : 1.0 / (h + std::sqrt(1.0 + h * h));
        c = 1.0 / std::sqrt(1.0 + tt * tt);
        s = tt * c;
    }
    k1 = ku - tt * kuv;
    k2 = kv + tt * kuv;
    if (k1 >= k2) {
        pdir1 = c * r_old_u - s * r_old_v;
    } else {
        std::swap(k1, k2);
        pdir1 = s * r_old_u + c * r_old_v;
    }
    pdir1.normalize();
    pdir2 = new_norm.cross(pdir1);
}

struct FaceFrame {
    Vec3 t;
    Vec3 b;
    std::array<Vec3, 3> e;
};

FaceFrame face_frame(const TriangleMesh& mesh, const Face& f) {
    FaceFrame fr;
    const Vec3& v0 = mesh.vertices[f[0]];
    const Vec3& v1 = mesh.vertices[f[1]];
    const Vec3& v2 = mesh.vertices[f[2]];
    fr.e = {v2 - v1, v0 - v2, v1 - v0};
    fr.t = fr.e[0].normalized();
    const Vec3 n = fr.e[0].cross(fr.e[1]);
    fr.b = n.cross(fr.t).normalized();
    return fr;
}

std::vector<double> point_areas(const TriangleMesh& mesh, const std::vector<std::array<double, 3>>& corners) {
    std::vector<double> areas(mesh.vertices.size(), 0.0);
    for (std::size_t i = 0; i < mesh.faces.size(); ++i)
        for (int j = 0; j < 3; ++j) areas[mesh.faces[i][j]] += corners[i][j];
    return areas;
}

}  // namespace

std::vector<std::array<double, 3>> corner_areas(const TriangleMesh& mesh) {
    std::vector<std::array<double, 3>> corners(mesh.faces.size());
    parallel_for(mesh.faces.size(), [&](std::size_t i) {
        const Face& f = mesh.faces[i];
        const Vec3 e[3] = {mesh.vertices[f[2]] - mesh.vertices[f[1]], mesh.vertices[f[0]] - mesh.vertices[f[2]],
                           mesh.vertices[f[1]] - mesh.vertices[f[0]]};
        const double area = 0.5 * e[0].cross(e[1]).norm();
        const double l2[3] = {e[0].squaredNorm(), e[1].squaredNorm(), e[2].squaredNorm()};
        const double ew[3] = {l2[0] * (l2[1] + l2[2] - l2[0]), l2[1] * (l2[2] + l2[0] - l2[1]),
                              l2[2] * (l2[0] + l2[1] - l2[2])};
        auto& c = corners[i];
        if (area <= 0.0) {
            c = {0.0, 0.0, 0.0};
        } else if (ew[0] <= 0.0) {
            c[1] = -0.25 * l2[2] * area / e[0].dot(e[2]);
            c[2] = -0.25 * l2[1] * area / e[0].dot(e[1]);
            c[0] = area - c[1] - c[2];
        } else if (ew[1] <= 0.0) {
            c[2] = -0.25 * l2[0] * area / e[1].dot(e[0]);
            c[0] = -0.25 * l2[2] * area / e[1].dot(e[2]);
            c[1] = area - c[2] - c[0];
        } else if (ew[2] <= 0.0) {
            c[0] = -0.25 * l2[1] * area / e[2].dot(e[1]);
            c[1] = -0.25 * l2[0] * area / e[2].dot(e[0]);
            c[2] = area - c[0] - c[1];
        } else {
            const double scale = 0.5 * area / (ew[0] + ew[1] + ew[2]);
            for (int j = 0; j < 3; ++j) c[j] = scale * (ew[next(j)] + ew[prev(j)]);
        }
    });
    return corners;
}

CurvatureField principal_curvatures(const TriangleMesh& mesh) {
    const std::size_t nv = mesh.vertices.size();
    const std::size_t nf = mesh.faces.size();
    if (mesh.normals.size() != nv) throw std::invalid_argument("curvature requires per-vertex normals");

    CurvatureField field;
    field.normals = mesh.normals;
    field.k1.assign(nv, 0.0);
    field.k2.assign(nv, 0.0);
    field.e1.assign(nv, Vec3::Zero());
    field.e2.assign(nv, Vec3::Zero());
    field.isolated.assign(nv, 0);

    // Initial per-vertex frame from an incident edge.
    std::vector<Vec3> pdir1(nv, Vec3::Zero());
    for (const Face& f : mesh.faces)
        for (int j = 0; j < 3; ++j) pdir1[f[j]] = mesh.vertices[f[next(j)]] - mesh.vertices[f[j]];
    std::vector<Vec3> pdir2(nv);
    for (std::size_t i = 0; i < nv; ++i) {
        const Vec3& n = mesh.normals[i];
        Vec3 d = pdir1[i].cross(n);
        d = d.norm() > 0.0 ? Vec3(d.normalized()) : any_perpendicular(n);
        pdir1[i] = d;
        pdir2[i] = n.cross(d);
    }

    const auto corners = corner_areas(mesh);
    const auto areas = point_areas(mesh, corners);

    // Per-face least-squares fit of the second fundamental form from normal
    // differences along the three edges.
    struct FaceFit {
        Vec3 t, b;
        double m[3];
        bool valid;
    };
    std::vector<FaceFit> fits(nf);
    parallel_for(nf, [&](std::size_t i) {
        const Face& f = mesh.faces[i];
        const FaceFrame fr = face_frame(mesh, f);
        FaceFit& fit = fits[i];
        fit.t = fr.t;
        fit.b = fr.b;
        Eigen::Matrix3d w = Eigen::Matrix3d::Zero();
        Eigen::Vector3d m = Eigen::Vector3d::Zero();
        for (int j = 0; j < 3; ++j) {
            const double u = fr.e[j].dot(fr.t);
            const double v = fr.e[j].dot(fr.b);
            w(0, 0) += u * u;
            w(0, 1) += u * v;
            w(2, 2) += v * v;
            const Vec3 dn = mesh.normals[f[prev(j)]] - mesh.normals[f[next(j)]];
            const double dnu = dn.dot(fr.t);
            const double dnv = dn.dot(fr.b);
            m(0) += dnu * u;
            m(1) += dnu * v + dnv * u;
            m(2) += dnv * v;
        }
        w(1, 1) = w(0, 0) + w(2, 2);
        w(1, 2) = w(0, 1);
        w(1, 0) = w(0, 1);
        w(2, 1) = w(1, 2);
        Eigen::LDLT<Eigen::Matrix3d> ldlt(w);
        fit.valid = ldlt.info() == Eigen::Success && fr.t.allFinite() && fr.b.allFinite();
        const Eigen::Vector3d sol = fit.valid ? Eigen::Vector3d(ldlt.solve(m)) : Eigen::Vector3d::Zero();
        fit.valid = fit.valid && sol.allFinite();
        for (int k = 0; k < 3; ++k) fit.m[k] = fit.valid ? sol(k) : 0.0;
    });

    const auto incident = vertex_faces(mesh);
    parallel_for(nv, [&](std::size_t vi) {
        const Vec3& n = mesh.normals[vi];
        if (incident[vi].empty() || !(areas[vi] > 0.0)) {
            field.isolated[vi] = 1;
            field.e1[vi] = any_perpendicular(n);
            field.e2[vi] = n.cross(field.e1[vi]);
            return;
        }
        double c1 = 0.0, c12 = 0.0, c2 = 0.0;
        for (int fi : incident[vi]) {
            const FaceFit& fit = fits[fi];
            if (!fit.valid) continue;
            const Face& f = mesh.faces[fi];
            const int j = f[0] == static_cast<int>(vi) ? 0 : (f[1] == static_cast<int>(vi) ? 1 : 2);
            double a, b, c;
            proj_curv(fit.t, fit.b, fit.m[0], fit.m[1], fit.m[2], pdir1[vi], pdir2[vi], a, b, c);
            const double wt = corners[fi][j] / areas[vi];
            c1 += wt * a;
            c12 += wt * b;
            c2 += wt * c;
        }
        diagonalize_curv(pdir1[vi], pdir2[vi], c1, c12, c2, n, field.e1[vi], field.e2[vi], field.k1[vi],
                         field.k2[vi]);
    });
    return field;
}

CurvatureField curvature_derivative(const TriangleMesh& mesh, const CurvatureField& input) {
    const std::size_t nv = mesh.vertices.size();
    const std::size_t nf = mesh.faces.size();
    if (input.size() != nv) throw std::invalid_argument("curvature field does not match mesh");
    CurvatureField field = input;
    field.dcurv.assign(nv, {0.0, 0.0, 0.0, 0.0});

    const auto corners = corner_areas(mesh);
    const auto areas = point_areas(mesh, corners);

    struct FaceFit {
        Vec3 t, b;
        std::array<double, 4> c;
        bool valid;
    };
    std::vector<FaceFit> fits(nf);
    parallel_for(nf, [&](std::size_t i) {
        const Face& f = mesh.faces[i];
        const FaceFrame fr = face_frame(mesh, f);
        FaceFit& fit = fits[i];
        fit.t = fr.t;
        fit.b = fr.b;
        std::array<std::array<double, 3>, 3> fcurv;
        for (int j = 0; j < 3; ++j) {
            const int v = f[j];
            proj_curv(field.e1[v], field.e2[v], field.k1[v], 0.0, field.k2[v], fr.t, fr.b, fcurv[j][0], fcurv[j][1],
                      fcurv[j][2]);
        }
        Eigen::Matrix4d w = Eigen::Matrix4d::Zero();
        Eigen::Vector4d m = Eigen::Vector4d::Zero();
        for (int j = 0; j < 3; ++j) {
            const double u = fr.e[j].dot(fr.t);
            const double v = fr.e[j].dot(fr.b);
            w(0, 0) += u * u;
            w(0, 1) += u * v;
            w(3, 3) += v * v;
            double d[3];
            for (int k = 0; k < 3; ++k) d[k] = fcurv[prev(j)][k] - fcurv[next(j)][k];
            m(0) += u * d[0];
            m(1) += v * d[0] + 2.0 * u * d[1];
            m(2) += 2.0 * v * d[1] + u * d[2];
            m(3) += v * d[2];
        }
        w(1, 1) = 2.0 * w(0, 0) + w(3, 3);
        w(1, 2) = 2.0 * w(0, 1);
        w(2, 2) = w(0, 0) + 2.0 * w(3, 3);
        w(2, 3) = w(0, 1);
        Eigen::Matrix4d sym = w.selfadjointView<Eigen::Upper>();
        Eigen::LDLT<Eigen::Matrix4d> ldlt(sym);
        fit.valid = ldlt.info() == Eigen::Success && fr.t.allFinite() && fr.b.allFinite();
        const Eigen::Vector4d sol = fit.valid ? Eigen::Vector4d(ldlt.solve(m)) : Eigen::Vector4d::Zero();
        fit.valid = fit.valid && sol.allFinite();
        for (int k = 0; k < 4; ++k) fit.c[k] = fit.valid ? sol(k) : 0.0;
    });

    const auto incident = vertex_faces(mesh);
    parallel_for(nv, [&](std::size_t vi) {
        if (incident[vi].empty() || !(areas[vi] > 0.0)) return;
        std::array<double, 4> acc{0.0, 0.0, 0.0, 0.0};
        for (int fi : incident[vi]) {
            const FaceFit& fit = fits[fi];
            if (!fit.valid) continue;
            const Face& f = mesh.faces[fi];
            const int j = f[0] == static_cast<int>(vi) ? 0 : (f[1] == static_cast<int>(vi) ? 1 : 2);
            const auto c = proj_dcurv(fit.t, fit.b, fit.c, field.e1[vi], field.e2[vi]);
            const double wt = corners[fi][j] / areas[vi];
            for (int k = 0; k < 4; ++k) acc[k] += wt * c[k];
        }
        field.dcurv[vi] = acc;
    });
    return field;
}

CurvatureField compute_curvature(const TriangleMesh& mesh) {
    return curvature_derivative(mesh, principal_curvatures(mesh));
}

double nearest_rank_percentile(std::vector<double> values, double p) {
    if (values.empty()) throw std::invalid_argument("percentile of an empty set");
    if (!(p > 0.0 && p <= 100.0)) throw std::invalid_argument("percentile out of range");
    const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(values.size())));
    const std::size_t index = std::clamp<std::size_t>(rank, 1, values.size()) - 1;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(index), values.end());
    return values[index];
}

CurvatureField normalize_percentile(const CurvatureField& field) {
    if (field.k1.empty()) throw std::invalid_argument("cannot normalize an empty curvature field");
    std::vector<double> magnitudes(field.k1.size());
    for (std::size_t i = 0; i < field.k1.size(); ++i) magnitudes[i] = std::abs(field.k1[i]);
    const double s = nearest_rank_percentile(std::move(magnitudes), 90.0);
    CurvatureField out = field;
    out.normalized = true;
    if (!(s > 0.0)) {
        out.zero_field = true;
        return out;
    }
    for (std::size_t i = 0; i < out.k1.size(); ++i) {
        out.k1[i] /= s;
        out.k2[i] /= s;
    }
    const double s2 = s * s;
    for (auto& c : out.dcurv)
        for (double& x : c) x /= s2;
    out.percentile_scale = field.percentile_scale * s;
    return out;
}

std::vector<Vec3> view_directions(const TriangleMesh& mesh, const Vec3& eye) {
    std::vector<Vec3> dirs(mesh.vertices.size());
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        const Vec3 d = eye - mesh.vertices[i];
        const double len = d.norm();
        dirs[i] = len > 0.0 ? Vec3(d / len) : Vec3::Zero();
    }
    return dirs;
}

RadialSample radial_curvature_at(double k1, double k2, const std::array<double, 4>& c, double u, double v,
                                 double ndotv) {
    RadialSample out;
    const double s2 = u * u + v * v;
    if (s2 < 1e-12) {
        out.kr = k1;
        out.dkr = 0.0;
        out.degenerate = true;
        return out;
    }
    const double sin_theta = std::sqrt(s2);
    const double cu = u / sin_theta;
    const double sv = v / sin_theta;
    out.kr = k1 * cu * cu + k2 * sv * sv;
    const double cwww = c[0] * cu * cu * cu + 3.0 * c[1] * cu * cu * sv + 3.0 * c[2] * cu * sv * sv + c[3] * sv * sv * sv;
    const double tr = (k2 - k1) * cu * sv;
    out.dkr = cwww - 2.0 * (ndotv / sin_theta) * tr * tr;
    return out;
}

RadialCurvature radial_curvature(const CurvatureField& field, std::span<const Vec3> view_dirs) {
    if (!field.has_derivative()) throw std::invalid_argument("radial curvature requires the derivative tensor");
    if (view_dirs.size() != field.size()) throw std::invalid_argument("view directions do not match field");
    const std::size_t n = field.size();
    RadialCurvature out;
    out.kr.resize(n);
    out.dkr.resize(n);
    out.ndotv.resize(n);
    out.degenerate.resize(n);
    parallel_for(n, [&](std::size_t i) {
        const Vec3& w = view_dirs[i];
        const double ndotv = w.dot(field.normals[i]);
        const auto sample =
            radial_curvature_at(field.k1[i], field.k2[i], field.dcurv[i], w.dot(field.e1[i]), w.dot(field.e2[i]), ndotv);
        out.kr[i] = sample.kr;
        out.dkr[i] = sample.dkr;
        out.ndotv[i] = ndotv;
        out.degenerate[i] = sample.degenerate ? 1 : 0;
    });
    return out;
}

ViewDependentSample view_dependent_at(double k1, double k2, double u, double v, double ndotv) {
    const double s2 = u * u + v * v;
    double u2 = 1.0, uv = 0.0, v2 = 0.0;
    if (s2 >= 1e-24) {
        u2 = u * u / s2;
        uv = u * v / s2;
        v2 = v * v / s2;
    }
    const double sec_minus_1 = 1.0 / std::max(std::abs(ndotv), 1e-3) - 1.0;
    const double q11 = k1 * (1.0 + sec_minus_1 * u2);
    const double q12 = k1 * (sec_minus_1 * uv);
    const double q21 = k2 * (sec_minus_1 * uv);
    const double q22 = k2 * (1.0 + sec_minus_1 * v2);

    const double a = q11 * q11 + q21 * q21;
    const double b = q11 * q12 + q21 * q22;
    const double d = q12 * q12 + q22 * q22;
    double lambda = 0.5 * (a + d);
    const double disc = 0.25 * (a - d) * (a - d) + b * b;
    if (disc > 0.0) lambda += std::sqrt(disc);

    ViewDependentSample out;
    if (b != 0.0) {
        out.direction = Vec2(lambda - d, b).normalized();
    } else {
        out.direction = a >= d ? Vec2(1.0, 0.0) : Vec2(0.0, 1.0);
    }
    out.kt = std::sqrt(std::max(lambda, 0.0));
    return out;
}

ViewDependentField view_dependent_curvature(const CurvatureField& field, const TriangleMesh& mesh,
                                            const Camera& camera) {
    const std::size_t n = field.size();
    if (mesh.vertices.size() != n) throw std::invalid_argument("curvature field does not match mesh");
    camera.validate();
    const auto dirs = view_directions(mesh, camera.position);

    ViewDependentField out;
    out.kt.resize(n);
    out.direction.resize(n);
    out.derivative.assign(n, 0.0);
    out.ndotv.resize(n);
    parallel_for(n, [&](std::size_t i) {
        const Vec3& w = dirs[i];
        const double ndotv = w.dot(field.normals[i]);
        const auto s = view_dependent_at(field.k1[i], field.k2[i], w.dot(field.e1[i]), w.dot(field.e2[i]), ndotv);
        out.kt[i] = s.kt;
        out.direction[i] = s.direction;
        out.ndotv[i] = ndotv;
    });

    // Derivative of kt along its direction, from the two points where the
    // direction line leaves the one-ring.
    const auto incident = vertex_faces(mesh);
    parallel_for(n, [&](std::size_t i) {
        const Vec3& v0 = mesh.vertices[i];
        const Vec3 t1 = out.direction[i].x() * field.e1[i] + out.direction[i].y() * field.e2[i];
        const Vec3 t2 = field.normals[i].cross(t1);
        const double v0_t2 = v0.dot(t2);
        const double foreshorten = std::max(std::abs(out.ndotv[i]), 1e-3);
        double sum = 0.0;
        int count = 0;
        for (int fi : incident[i]) {
            const Face& f = mesh.faces[fi];
            const int j = f[0] == static_cast<int>(i) ? 0 : (f[1] == static_cast<int>(i) ? 1 : 2);
            const int i1 = f[next(j)];
            const int i2 = f[prev(j)];
            const double a = mesh.vertices[i1].dot(t2);
            const double b = mesh.vertices[i2].dot(t2);
            const double w1 = (b - v0_t2) / (b - a);
            if (!(w1 >= 0.0 && w1 < 1.0)) continue;
            const double w2 = 1.0 - w1;
            const Vec3 p = w1 * mesh.vertices[i1] + w2 * mesh.vertices[i2];
            const double kt = w1 * out.kt[i1] + w2 * out.kt[i2];
            const double dist = (p - v0).dot(t1) * foreshorten;
            if (std::abs(dist) < 1e-300) continue;
            sum += (kt - out.kt[i]) / dist;
            if (++count == 2) break;
        }
        out.derivative[i] = count > 0 ? sum / count : 0.0;
    });
    return out;
}

ViewDependentField normalize_percentile(const ViewDependentField& field, std::optional<double> joint_scale) {
    if (field.kt.empty()) throw std::invalid_argument("cannot normalize an empty view-dependent field");
    ViewDependentField out = field;
    out.normalized = true;
    const double s = joint_scale ? *joint_scale : nearest_rank_percentile(field.kt, 90.0);
    if (!(s > 0.0)) {
        out.zero_field = true;
        return out;
    }
    for (double& k : out.kt) k /= s;
    for (double& d : out.derivative) d /= s;
    out.percentile_scale = field.percentile_scale * s;
    return out;
}

void write_curvature_dump(const std::filesystem::path& path, const CurvatureField& field) {
    const std::size_t n = field.size();
    std::vector<std::vector<double>> channels(13, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        channels[0][i] = field.k1[i];
        channels[1][i] = field.k2[i];
        for (int k = 0; k < 3; ++k) {
            channels[2 + k][i] = field.e1[i][k];
            channels[5 + k][i] = field.e2[i][k];
        }
        if (field.has_derivative())
            for (int k = 0; k < 4; ++k) channels[8 + k][i] = field.dcurv[i][k];
        channels[12][i] = field.isolated.size() == n ? field.isolated[i] : 0.0;
    }
    write_flat_floats(path, interleave_channels(channels));
}

}  // namespace linedraw
