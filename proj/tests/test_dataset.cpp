#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <set>

#include <nlohmann/json.hpp>

#include "linedraw/dataset.hpp"
#include "linedraw/primitives.hpp"
#include "support.hpp"

using namespace linedraw;
namespace prim = linedraw::primitives;

namespace {

const MapStack& small_maps() {
    static const MapStack maps = [] {
        const TriangleMesh t =
            prim::remove_faces(prim::torus(1.0, 0.5, 64, 32), [](const Vec3& c) { return c.y() > 0.3 && c.x() > 0.0; });
        return build_map_stack(t, test::look_at(Vec3(1.5, 2.0, 3.0), 96, 96));
    }();
    return maps;
}

Vec3 area_centroid(const TriangleMesh& m) {
    Vec3 sum = Vec3::Zero();
    double area = 0.0;
    for (const auto& f : m.faces) {
        const Vec3 &a = m.vertices[f[0]], &b = m.vertices[f[1]], &c = m.vertices[f[2]];
        const double w = 0.5 * (b - a).cross(c - a).norm();
        sum += w * (a + b + c) / 3.0;
        area += w;
    }
    return sum / area;
}

// Exhaustive k-medoids: lowest-cost subset, ties to the lexicographically
// smallest index set.
std::vector<std::size_t> exhaustive_kmedoids(const std::vector<double>& d, std::size_t n, std::size_t k) {
    std::vector<std::size_t> best, current;
    double best_cost = std::numeric_limits<double>::infinity();
    const auto cost = [&](const std::vector<std::size_t>& m) {
        double c = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double nearest = std::numeric_limits<double>::infinity();
            for (std::size_t j : m) nearest = std::min(nearest, d[i * n + j]);
            c += nearest;
        }
        return c;
    };
    const std::function<void(std::size_t)> recurse = [&](std::size_t start) {
        if (current.size() == k) {
            const double c = cost(current);
            if (c < best_cost - 1e-12) best_cost = c, best = current;
            return;
        }
        for (std::size_t i = start; i < n; ++i) {
            current.push_back(i);
            recurse(i + 1);
            current.pop_back();
        }
    };
    recurse(0);
    return best;
}

std::vector<double> euclidean_matrix(const std::vector<Eigen::Vector2d>& p) {
    const std::size_t n = p.size();
    std::vector<double> d(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) d[i * n + j] = (p[i] - p[j]).norm();
    return d;
}

// Short horizontal stroke at (x, y) on a 64x64 canvas.
Drawing stroke(int x, int y, int length = 12) {
    Drawing d(64, 64, 0.0);
    for (int i = 0; i < length; ++i) d(x + i, y) = 1.0;
    return d;
}

}  // namespace

TEST(PlaceCameras, ElevationTargetAndDistance) {
    TriangleMesh m = prim::transformed(prim::torus(1.0, 0.3, 48, 16), test::rotation(Vec3(1, 0, 0), 25.0), Vec3(0.5, -1, 2));
    for (const auto& up : {Vec3(0, 1, 0), Vec3(0, 0, 1), Vec3(1, 1, 0).normalized()}) {
        m.up_axis = up;
        const CameraPlacement p = place_cameras(m, 11);
        EXPECT_FALSE(p.default_up_used);
        const Vec3 c = area_centroid(m);
        double radius = 0.0;
        for (const Vec3& v : m.vertices) radius = std::max(radius, (v - c).norm());
        for (const Camera& cam : p.cameras) {
            EXPECT_LT((cam.target - c).norm(), 1e-9);
            const Vec3 dir = cam.position - cam.target;
            const double elevation = std::asin(dir.normalized().dot(up)) * 180.0 / M_PI;
            EXPECT_NEAR(elevation, 30.0, 1e-6);
            EXPECT_NEAR(dir.norm(), 2.5 * radius, 1e-9);
            EXPECT_EQ(cam.width, 768);
        }
        const double sep = std::abs(p.azimuths_degrees[0] - p.azimuths_degrees[1]);
        EXPECT_GE(std::min(sep, 360.0 - sep), 5.0);
    }
}

TEST(PlaceCameras, DeterministicAndDefaultUp) {
    TriangleMesh m = prim::icosphere(2);
    m.up_axis.reset();
    const CameraPlacement a = place_cameras(m, 5), b = place_cameras(m, 5), c = place_cameras(m, 6);
    EXPECT_TRUE(a.default_up_used);
    EXPECT_EQ(a.cameras[0].position, b.cameras[0].position);
    EXPECT_EQ(a.cameras[1].position, b.cameras[1].position);
    EXPECT_NE(a.cameras[0].position, c.cameras[0].position);
    EXPECT_NEAR((a.cameras[0].position - a.cameras[0].target).normalized().y(), 0.5, 1e-9);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const CameraPlacement p = place_cameras(m, seed);
        const double sep = std::abs(p.azimuths_degrees[0] - p.azimuths_degrees[1]);
        EXPECT_GE(std::min(sep, 360.0 - sep), 5.0);
    }
}

TEST(Candidates, CountAndProvenanceRoundTrip) {
    const MapStack& maps = small_maps();
    const CandidateSet set = generate_candidates(maps);
    ASSERT_EQ(set.drawings.size(), 264u);
    ASSERT_EQ(set.provenance.size(), 264u);
    int geometric = 0, canny = 0, canny2 = 0;
    for (std::size_t i = 0; i < set.drawings.size(); ++i) {
        const Provenance& p = set.provenance[i];
        EXPECT_EQ(p.index, int(i));
        geometric += p.geometric;
        canny += p.edge_method == "canny";
        canny2 += p.edge_method == "canny_2sigma";
        EXPECT_EQ(render_candidate(maps, candidate_provenance(int(i), {}, {})), set.drawings[i]);
    }
    EXPECT_EQ(geometric, 256);
    EXPECT_EQ(canny, 4);
    EXPECT_EQ(canny2, 4);
    EXPECT_THROW(candidate_provenance(264, {}, {}), std::out_of_range);
}

TEST(Candidates, AllOffIsContoursPlusSwitches) {
    const MapStack& maps = small_maps();
    // Last ladder entry (off) for every kind: index ((3*4+3)*4+3)*4 = 252.
    for (int extra = 0; extra < 4; ++extra) {
        const Provenance p = candidate_provenance(252 + extra, {}, {});
        EXPECT_TRUE(std::isinf(p.thresholds.t_s));
        EXPECT_TRUE(std::isinf(p.thresholds.t_r));
        EXPECT_TRUE(std::isinf(p.thresholds.t_a));
        const Drawing d = render_candidate(maps, p);
        const bool creases = extra & 2, borders = extra & 1;
        EXPECT_EQ(p.creases, creases);
        EXPECT_EQ(p.borders, borders);
        for (std::size_t i = 0; i < d.size(); ++i) {
            const bool on = maps.contour[i] || (creases && maps.crease[i]) || (borders && maps.boundary[i]);
            ASSERT_EQ(d[i], on ? 1.0 : 0.0);
        }
    }
}

TEST(Candidates, EdgeProvenance) {
    const Provenance a = candidate_provenance(256, {}, {}), b = candidate_provenance(263, {}, {});
    EXPECT_FALSE(a.geometric);
    EXPECT_EQ(a.edge_method, "canny");
    EXPECT_EQ(a.edge_high, 0.05);
    EXPECT_DOUBLE_EQ(a.edge_low, 0.02);
    EXPECT_EQ(a.edge_sigma, 1.0);
    EXPECT_EQ(b.edge_method, "canny_2sigma");
    EXPECT_EQ(b.edge_high, 0.4);
    EXPECT_EQ(b.edge_sigma, 2.0);
}

TEST(ChamferMatrix, SymmetricZeroDiagonal) {
    std::vector<BinaryDrawing> d;
    for (int k = 0; k < 6; ++k) d.push_back(binarize(stroke(5 + 7 * k, 10 + 5 * k, 8 + k)));
    const std::vector<double> m = chamfer_matrix(d);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j) {
            EXPECT_EQ(m[i * 6 + j], m[j * 6 + i]);
            if (i == j)
                EXPECT_EQ(m[i * 6 + j], 0.0);
            else
                EXPECT_NEAR(m[i * 6 + j], chamfer(d[i], d[j]), 1e-12);
        }
    d.push_back(BinaryDrawing{Mask(64, 64, 0)});
    EXPECT_THROW(chamfer_matrix(d), std::domain_error);
}

TEST(Pam, MatchesExhaustiveOnRandomInstances) {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 10.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Eigen::Vector2d> p;
        // Three tight clusters plus noise points.
        for (int c = 0; c < 3; ++c) {
            const Eigen::Vector2d center(u(rng) * 5, u(rng) * 5);
            for (int i = 0; i < 3; ++i) p.push_back(center + Eigen::Vector2d(u(rng), u(rng)) * 0.01);
        }
        const std::size_t n = p.size(), k = 3;
        const std::vector<double> d = euclidean_matrix(p);
        const KMedoidsResult r = pam(d, n, k);
        const std::vector<std::size_t> oracle = exhaustive_kmedoids(d, n, k);
        EXPECT_NEAR(r.cost, kmedoids_cost(d, n, oracle), 1e-9);
        std::set<std::size_t> clusters;
        for (std::size_t m : r.medoids) clusters.insert(m / 3);
        EXPECT_EQ(clusters.size(), 3u);
    }
}

TEST(Pam, SwapNeverIncreasesCostAndIsLocallyOptimal) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Eigen::Vector2d> p(30);
        for (auto& x : p) x = Eigen::Vector2d(u(rng), u(rng));
        const std::vector<double> d = euclidean_matrix(p);
        const KMedoidsResult r = pam(d, 30, 4);
        EXPECT_LE(r.cost, r.build_cost);
        EXPECT_TRUE(std::is_sorted(r.medoids.begin(), r.medoids.end()));
        EXPECT_NEAR(r.cost, kmedoids_cost(d, 30, r.medoids), 1e-12);
        for (std::size_t out = 0; out < r.medoids.size(); ++out)
            for (std::size_t in = 0; in < 30; ++in) {
                if (std::find(r.medoids.begin(), r.medoids.end(), in) != r.medoids.end()) continue;
                std::vector<std::size_t> swapped = r.medoids;
                swapped[out] = in;
                EXPECT_GE(kmedoids_cost(d, 30, swapped), r.cost - 1e-12);
            }
    }
}

TEST(Pam, DeterministicAndValidated) {
    const std::vector<double> d = euclidean_matrix({{0, 0}, {0, 0}, {5, 0}, {10, 0}});
    const KMedoidsResult r = pam(d, 4, 3);
    // The duplicate pair is never co-selected when distinct points remain.
    EXPECT_EQ(r.medoids, (std::vector<std::size_t>{0, 2, 3}));
    EXPECT_EQ(pam(d, 4, 3).medoids, r.medoids);
    EXPECT_EQ(pam(d, 4, 4).medoids.size(), 4u);
    EXPECT_THROW(pam(d, 4, 0), std::invalid_argument);
    EXPECT_THROW(pam(d, 4, 5), std::invalid_argument);
    EXPECT_THROW(pam(d, 3, 2), std::invalid_argument);
}

TEST(SelectDistinct, ClustersDuplicatesAndEmpties) {
    // Three clusters of near-duplicate strokes, one empty drawing.
    std::vector<Drawing> c;
    for (int k = 0; k < 4; ++k) c.push_back(stroke(5 + (k % 2), 5 + k / 2));
    for (int k = 0; k < 4; ++k) c.push_back(stroke(40 + (k % 2), 10 + k / 2));
    c.push_back(Drawing(64, 64, 0.0));
    for (int k = 0; k < 3; ++k) c.push_back(stroke(20 + k, 50));
    const Selection s = select_distinct(c, 3);
    EXPECT_EQ(s.dropped_empty, (std::vector<std::size_t>{8}));
    ASSERT_EQ(s.selected.size(), 3u);
    std::set<int> clusters;
    for (std::size_t i : s.selected) clusters.insert(i < 4 ? 0 : i < 8 ? 1 : 2);
    EXPECT_EQ(clusters.size(), 3u);
    EXPECT_LE(s.cost, s.build_cost);

    // Exact duplicates: {A, A, B, C} with k = 3 must take A once.
    const std::vector<Drawing> dup{stroke(5, 5), stroke(5, 5), stroke(30, 30), stroke(45, 55)};
    EXPECT_EQ(select_distinct(dup, 3).selected, (std::vector<std::size_t>{0, 2, 3}));
    EXPECT_THROW(select_distinct(dup, 5), std::invalid_argument);
    std::vector<Drawing> all;
    for (int k = 0; k < 8; ++k) all.push_back(stroke(3 + 7 * k, 4 + 7 * k, 5));
    EXPECT_EQ(select_distinct(all, 8).selected, (std::vector<std::size_t>{0, 1, 2, 3, 4, 5, 6, 7}));
}

TEST(SelectDistinct, EightFromFullCandidateSet) {
    const CandidateSet set = generate_candidates(small_maps());
    const Selection s = select_distinct(set.drawings, 8);
    EXPECT_EQ(s.selected.size(), 8u);
    EXPECT_TRUE(std::is_sorted(s.selected.begin(), s.selected.end()));
    EXPECT_LE(s.cost, s.build_cost);
    EXPECT_EQ(select_distinct(set.drawings, 8).selected, s.selected);
}

TEST(WriteCandidateSet, LayoutAndManifest) {
    const MapStack& maps = small_maps();
    const CandidateSet set = generate_candidates(maps);
    const Selection s = select_distinct(set.drawings, 8);
    test::TempDir dir;
    const Camera cam = test::look_at(Vec3(1.5, 2.0, 3.0), 96, 96);
    write_candidate_set(dir.path(), "torus", "view0", set, s, cam, {}, {}, 42);
    const auto base = dir.path() / "torus" / "view0";
    EXPECT_TRUE(std::filesystem::exists(base / "candidate_000.png"));
    EXPECT_TRUE(std::filesystem::exists(base / "candidate_263.png"));
    std::ifstream in(base / "manifest.json");
    const auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j["seed"], 42);
    EXPECT_EQ(j["candidate_count"], 264);
    EXPECT_EQ(j["candidates"].size(), 264u);
    EXPECT_EQ(j["selected"].get<std::vector<std::size_t>>(), s.selected);
    EXPECT_EQ(j["ladder"]["suggestive"][3], "off");
    EXPECT_EQ(j["candidates"][252]["thresholds"]["t_S"], "off");
    EXPECT_EQ(j["candidates"][263]["method"], "canny_2sigma");
}
