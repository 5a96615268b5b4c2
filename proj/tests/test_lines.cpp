#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include <Eigen/SVD>

#include "linedraw/lines.hpp"
#include "linedraw/map_stack.hpp"
#include "linedraw/parallel.hpp"
#include "linedraw/primitives.hpp"
#include "support.hpp"

using namespace linedraw;
namespace prim = linedraw::primitives;

namespace {

constexpr double chain_tolerance = 2e-6;

// Barycentric coordinates of p in face f.
Eigen::Vector3d barycentric(const TriangleMesh& m, int f, const Vec3& p) {
    const Vec3& a = m.vertices[m.faces[f][0]];
    const Vec3& b = m.vertices[m.faces[f][1]];
    const Vec3& c = m.vertices[m.faces[f][2]];
    const Vec3 v0 = b - a, v1 = c - a, v2 = p - a;
    const double d00 = v0.dot(v0), d01 = v0.dot(v1), d11 = v1.dot(v1), d20 = v2.dot(v0), d21 = v2.dot(v1);
    const double den = d00 * d11 - d01 * d01;
    const double v = (d11 * d20 - d01 * d21) / den, w = (d00 * d21 - d01 * d20) / den;
    return {1.0 - v - w, v, w};
}

double interpolate(const TriangleMesh& m, int f, const Vec3& p, const std::vector<double>& values) {
    const Eigen::Vector3d b = barycentric(m, f, p);
    return b[0] * values[m.faces[f][0]] + b[1] * values[m.faces[f][1]] + b[2] * values[m.faces[f][2]];
}

double mean_axis_distance(const test::SegmentGraph& g, const std::vector<int>& comp) {
    double s = 0.0;
    for (int v : comp) s += std::hypot(g.nodes[v].x(), g.nodes[v].z());
    return s / comp.size();
}

// Hyperbolic bevel z = -a sqrt(x^2 + eps^2) (a crest along x = 0), or its
// mirror image (a groove).
TriangleMesh bevel(double sign) {
    return prim::height_field(60, 30, 2.0, [sign](double x, double) { return -sign * 0.3 * std::sqrt(x * x + 0.01); });
}

// Icosphere with a smooth, asymmetric radial bump field, so that no line
// decision sits on a symmetry plane.
TriangleMesh bumpy_sphere() {
    TriangleMesh m = prim::icosphere(4);
    for (Vec3& p : m.vertices) {
        const Vec3 u = p.normalized();
        p = u * (1.0 + 0.12 * std::sin(3.1 * u.x() + 0.4) * std::cos(2.3 * u.y() - 0.7) + 0.07 * std::sin(4.7 * u.z() + 1.3));
    }
    m.normals = area_weighted_normals(m.vertices, m.faces);
    return m;
}

}  // namespace

TEST(Contours, SphereIsOneClosedLoopPerpendicularToView) {
    const TriangleMesh s = prim::icosphere(4);
    const Vec3 eye(1.0, 2.0, 3.5);
    const Segments c = occluding_contours(s, eye);
    ASSERT_FALSE(c.empty());
    const test::SegmentGraph g = test::chain_segments(c, chain_tolerance);
    EXPECT_EQ(g.components.size(), 1u);
    EXPECT_TRUE(g.all_degree_two());
    // Plane through the loop: smallest singular direction of the centred points.
    Eigen::MatrixXd pts(g.nodes.size(), 3);
    Vec3 mean = Vec3::Zero();
    for (const Vec3& p : g.nodes) mean += p;
    mean /= static_cast<double>(g.nodes.size());
    for (std::size_t i = 0; i < g.nodes.size(); ++i) pts.row(i) = (g.nodes[i] - mean).transpose();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(pts, Eigen::ComputeThinV);
    const Vec3 normal = svd.matrixV().col(2);
    const double angle = test::angle_degrees(normal, eye);
    EXPECT_LT(std::min(angle, 180.0 - angle), 2.0);
    for (const LineSegment3D& seg : c) {
        EXPECT_EQ(seg.kind, LineKind::Contour);
        EXPECT_EQ(seg.scalar[0], 1.0);
    }
}

TEST(Contours, FrontFacingPlaneHasNone) {
    EXPECT_TRUE(occluding_contours(prim::grid(10, 10, 1.0), Vec3(0.1, 0.2, 3.0)).empty());
}

TEST(Contours, TorusAlongAxisGivesTwoNestedLoops) {
    const TriangleMesh t = prim::torus(1.0, 0.35, 96, 48);
    const Segments c = occluding_contours(t, Vec3(0.0, 6.0, 0.0));
    const test::SegmentGraph g = test::chain_segments(c, chain_tolerance);
    ASSERT_EQ(g.components.size(), 2u);
    EXPECT_TRUE(g.all_degree_two());
    const double r0 = mean_axis_distance(g, g.components[0]), r1 = mean_axis_distance(g, g.components[1]);
    EXPECT_GT(std::abs(r0 - r1), 0.5);
    EXPECT_NEAR(std::min(r0, r1), 1.0 - 0.35, 0.05);
    EXPECT_NEAR(std::max(r0, r1), 1.0 + 0.35, 0.05);
}

TEST(Contours, ClosedLoopsOnWatertightMeshes) {
    const std::vector<std::pair<TriangleMesh, Vec3>> cases = {
        {prim::icosphere(3), Vec3(0.5, 1.0, 3.0)},
        {prim::torus(1.0, 0.4, 64, 32), Vec3(1.0, 2.0, 4.0)},
        {prim::rounded_cube(1.0, 0.2, 12), Vec3(2.0, 1.5, 3.0)},
    };
    for (const auto& [mesh, eye] : cases) {
        const test::SegmentGraph g = test::chain_segments(occluding_contours(mesh, eye), chain_tolerance);
        EXPECT_FALSE(g.nodes.empty());
        EXPECT_TRUE(g.all_degree_two());
    }
}

TEST(Contours, EndpointsLieOnTheirFaces) {
    const TriangleMesh t = prim::torus(1.0, 0.4, 48, 24);
    for (const LineSegment3D& s : occluding_contours(t, Vec3(1.0, 2.0, 3.0))) {
        for (const Vec3& p : s.p) {
            const Eigen::Vector3d b = barycentric(t, s.face, p);
            EXPECT_GE(b.minCoeff(), -1e-9);
            EXPECT_LE(b.maxCoeff(), 1.0 + 1e-9);
        }
    }
}

TEST(BoundariesCreases, ClosedCube) {
    const Segments s = boundaries_and_creases(prim::cube(1.0), 60.0);
    EXPECT_EQ(select_kind(s, LineKind::Boundary).size(), 0u);
    EXPECT_EQ(select_kind(s, LineKind::Crease).size(), 12u);
}

TEST(BoundariesCreases, OpenCylinderHasTwoBoundaryLoops) {
    const Segments s = boundaries_and_creases(prim::cylinder(0.5, 1.0, 32, 4), 60.0);
    const Segments b = select_kind(s, LineKind::Boundary);
    EXPECT_EQ(b.size(), 64u);
    const test::SegmentGraph g = test::chain_segments(b, 1e-9);
    EXPECT_EQ(g.components.size(), 2u);
    EXPECT_TRUE(g.all_degree_two());
}

TEST(BoundariesCreases, SmoothIcosphereHasNoCreases) {
    EXPECT_TRUE(select_kind(boundaries_and_creases(prim::icosphere(3), 60.0), LineKind::Crease).empty());
}

TEST(SuggestiveContours, SphereHasNone) {
    const TriangleMesh s = prim::icosphere(4);
    const LineGeometry g = extract_lines(s, test::look_at(Vec3(0.5, 1.0, 3.0)));
    EXPECT_TRUE(g.suggestive.empty());
}

TEST(SuggestiveContours, PlaneHasNone) {
    const TriangleMesh p = prim::grid(20, 20, 2.0);
    const LineGeometry g = extract_lines(p, test::look_at(Vec3(0.5, 1.0, 3.0)));
    EXPECT_TRUE(g.suggestive.empty());
}

TEST(SuggestiveContours, TorusGrazingViewEndpointsHavePositiveDerivative) {
    const TriangleMesh t = prim::torus(1.0, 0.4, 120, 60);
    const Camera cam = test::look_at(Vec3(0.0, 0.8, 4.0));
    const LineGeometry g = extract_lines(t, cam);
    ASSERT_FALSE(g.suggestive.empty());
    // Independent per-vertex fields, interpolated at each endpoint.
    const CurvatureField f = normalize_percentile(compute_curvature(t));
    const RadialCurvature rc = radial_curvature(f, view_directions(t, cam.position));
    for (const LineSegment3D& s : g.suggestive) {
        for (int k = 0; k < 2; ++k) {
            EXPECT_GT(s.scalar[k], 0.0);
            EXPECT_GT(interpolate(t, s.face, s.p[k], rc.dkr), 0.0);
            EXPECT_LT(std::abs(interpolate(t, s.face, s.p[k], rc.kr)), 1e-3);
            EXPECT_NEAR(s.scalar[k], interpolate(t, s.face, s.p[k], rc.dkr), 1e-9);
        }
    }
}

TEST(SuggestiveContours, ApproachContourAtGrazingAngles) {
    const TriangleMesh t = prim::torus(1.0, 0.4, 120, 60);
    const Camera cam = test::look_at(Vec3(0.0, 0.8, 4.0));
    const LineGeometry g = extract_lines(t, cam);
    ASSERT_FALSE(g.suggestive.empty());
    ASSERT_FALSE(g.contours.empty());
    std::vector<std::pair<double, double>> samples;  // (|n.v|, distance to contour)
    for (const LineSegment3D& s : g.suggestive) {
        const Vec3 p = 0.5 * (s.p[0] + s.p[1]);
        double best = 1e9;
        for (const LineSegment3D& c : g.contours) best = std::min(best, (0.5 * (c.p[0] + c.p[1]) - p).norm());
        const double nv = std::abs(interpolate(t, s.face, p, g.radial.ndotv));
        samples.push_back({nv, best});
    }
    std::sort(samples.begin(), samples.end());
    const std::size_t half = samples.size() / 2;
    double grazing = 0.0, frontal = 0.0;
    for (std::size_t i = 0; i < half; ++i) grazing += samples[i].second;
    for (std::size_t i = half; i < samples.size(); ++i) frontal += samples[i].second;
    EXPECT_LT(grazing / half, frontal / (samples.size() - half));
}

TEST(RidgesValleys, SphereHasNone) {
    const TriangleMesh s = prim::icosphere(4);
    EXPECT_TRUE(ridges_valleys(s, normalize_percentile(compute_curvature(s))).empty());
}

TEST(RidgesValleys, BevelCrestIsARidge) {
    const TriangleMesh m = bevel(1.0);
    const CurvatureField f = normalize_percentile(compute_curvature(m));
    const Segments rv = ridges_valleys(m, f);
    const Segments ridges = select_kind(rv, LineKind::Ridge);
    ASSERT_FALSE(ridges.empty());
    // Brute-force crest: x of the max-k1 vertex in each row of the grid.
    double crest_x = 0.0;
    int rows = 0;
    std::map<long, std::pair<double, double>> best;  // row y -> (k1, x)
    for (std::size_t i = 0; i < m.vertices.size(); ++i) {
        const long key = std::lround(m.vertices[i].y() * 1e6);
        auto it = best.find(key);
        if (it == best.end() || f.k1[i] > it->second.first) best[key] = {f.k1[i], m.vertices[i].x()};
    }
    for (const auto& [y, kx] : best) {
        crest_x += kx.second;
        ++rows;
    }
    crest_x /= rows;
    const double spacing = 2.0 / 60.0;
    double ymin = 1e9, ymax = -1e9;
    for (const LineSegment3D& s : ridges) {
        for (const Vec3& p : s.p) {
            EXPECT_LT(std::abs(p.x() - crest_x), 1.5 * spacing);
            ymin = std::min(ymin, p.y());
            ymax = std::max(ymax, p.y());
        }
        EXPECT_GT(s.scalar[0], 0.0);
    }
    EXPECT_GT(ymax - ymin, 1.5);  // traces most of the 2-unit crest
}

TEST(RidgesValleys, GrooveBottomIsAValley) {
    const TriangleMesh m = bevel(-1.0);
    const CurvatureField f = normalize_percentile(compute_curvature(m));
    const Segments valleys = select_kind(ridges_valleys(m, f), LineKind::Valley);
    ASSERT_FALSE(valleys.empty());
    double ymin = 1e9, ymax = -1e9;
    for (const LineSegment3D& s : valleys) {
        for (int k = 0; k < 2; ++k) {
            EXPECT_LT(std::abs(s.p[k].x()), 1.5 * 2.0 / 60.0);
            EXPECT_GT(s.scalar[k], 0.0);
            ymin = std::min(ymin, s.p[k].y());
            ymax = std::max(ymax, s.p[k].y());
        }
    }
    EXPECT_GT(ymax - ymin, 1.5);
    EXPECT_TRUE(select_kind(ridges_valleys(m, f), LineKind::Ridge).empty());
}

TEST(RidgesValleys, CameraInvariant) {
    const TriangleMesh m = prim::rounded_cube(1.0, 0.25, 10);
    const CurvatureField f = normalized_curvature(m);
    const LineGeometry a = extract_lines(m, f, test::look_at(Vec3(2, 1, 3)));
    const LineGeometry b = extract_lines(m, f, test::look_at(Vec3(-3, 2, -1)));
    ASSERT_EQ(a.ridges.size(), b.ridges.size());
    ASSERT_EQ(a.valleys.size(), b.valleys.size());
    for (std::size_t i = 0; i < a.ridges.size(); ++i) {
        EXPECT_EQ(a.ridges[i].p, b.ridges[i].p);
        EXPECT_EQ(a.ridges[i].scalar, b.ridges[i].scalar);
    }
}

TEST(ApparentRidges, FrontFacingPlaneHasNone) {
    const TriangleMesh p = prim::grid(20, 20, 2.0);
    EXPECT_TRUE(extract_lines(p, test::look_at(Vec3(0.2, 0.3, 3.0))).apparent.empty());
}

TEST(ApparentRidges, SphereFrontCapIsEmpty) {
    const TriangleMesh s = prim::icosphere(4);
    const Camera cam = test::look_at(Vec3(0.0, 0.0, 4.0));
    const LineGeometry g = extract_lines(s, cam);
    for (const LineSegment3D& seg : g.apparent) {
        for (const Vec3& p : seg.p) {
            const double nv = p.normalized().dot((cam.position - p).normalized());
            EXPECT_LE(nv, 0.9);
        }
    }
}

TEST(ApparentRidges, RoundedCubeLinesSitOnHighViewCurvature) {
    const TriangleMesh m = prim::rounded_cube(1.0, 0.15, 16);
    const Camera cam = test::look_at(Vec3(2.0, 1.5, 3.0));
    const LineGeometry g = extract_lines(m, cam);
    ASSERT_FALSE(g.apparent.empty());
    // Per-vertex scan: kt over front-facing vertices.
    std::vector<double> front;
    for (std::size_t i = 0; i < m.vertices.size(); ++i)
        if (g.viewdep.ndotv[i] > 0.0) front.push_back(g.viewdep.kt[i]);
    const double q75 = nearest_rank_percentile(front, 75.0);
    double mean = 0.0;
    for (const LineSegment3D& s : g.apparent) mean += 0.5 * (s.scalar[0] + s.scalar[1]);
    mean /= static_cast<double>(g.apparent.size());
    EXPECT_GT(mean, q75);
}

TEST(Lines, ViewCovariance) {
    const TriangleMesh t = bumpy_sphere();
    const Eigen::Matrix3d R = test::rotation(Vec3(1, 1, 0), 40.0);
    const TriangleMesh tr = prim::transformed(t, R);
    Camera a = test::look_at(Vec3(0.5, 2.0, 3.0));
    Camera b = a;
    b.position = R * a.position;
    b.up = R * a.up;
    const LineGeometry ga = extract_lines(t, a), gb = extract_lines(tr, b);
    for (auto member : {&LineGeometry::contours, &LineGeometry::suggestive, &LineGeometry::ridges,
                        &LineGeometry::valleys, &LineGeometry::apparent}) {
        const Segments& sa = ga.*member;
        const Segments& sb = gb.*member;
        ASSERT_EQ(sa.size(), sb.size());
        for (std::size_t i = 0; i < sa.size(); ++i) {
            EXPECT_EQ(sa[i].face, sb[i].face) << kind_name(sa[i].kind);
            for (int k = 0; k < 2; ++k) EXPECT_LT((R * sa[i].p[k] - sb[i].p[k]).norm(), 1e-5);
        }
    }
}

TEST(Lines, DeterministicAcrossThreadCounts) {
    const TriangleMesh t = prim::torus(1.0, 0.4, 96, 48);
    const Camera cam = test::look_at(Vec3(0.5, 1.5, 3.0));
    set_thread_count(1);
    const LineGeometry a = extract_lines(t, cam);
    set_thread_count(8);
    const LineGeometry b = extract_lines(t, cam);
    set_thread_count(1);
    const Segments sa = a.all(), sb = b.all();
    ASSERT_EQ(sa.size(), sb.size());
    for (std::size_t i = 0; i < sa.size(); ++i) {
        EXPECT_EQ(sa[i].p, sb[i].p);
        EXPECT_EQ(sa[i].scalar, sb[i].scalar);
        EXPECT_EQ(sa[i].face, sb[i].face);
    }
}

TEST(Lines, SegmentDumpFormat) {
    LineSegment3D s;
    s.p = {Vec3(0, 1, 2), Vec3(3, 4, 5)};
    s.scalar = {0.5, 0.25};
    s.kind = LineKind::Suggestive;
    std::ostringstream out;
    write_segments(out, {s});
    std::istringstream in(out.str());
    std::string kind;
    double v[8];
    in >> kind;
    for (double& x : v) in >> x;
    EXPECT_EQ(kind_from_name(kind), LineKind::Suggestive);
    EXPECT_DOUBLE_EQ(v[0], 0);
    EXPECT_DOUBLE_EQ(v[3], 0.5);
    EXPECT_DOUBLE_EQ(v[6], 5);
    EXPECT_DOUBLE_EQ(v[7], 0.25);
}
