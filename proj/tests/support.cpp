#include "support.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

#include "linedraw/filter.hpp"

namespace linedraw::test {

TempDir::TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("linedraw_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Eigen::Matrix3d rotation(const Vec3& axis, double degrees) {
    return Eigen::AngleAxisd(degrees * std::numbers::pi / 180.0, axis.normalized()).toRotationMatrix();
}

double angle_degrees(const Vec3& a, const Vec3& b) {
    const double c = std::clamp(a.normalized().dot(b.normalized()), -1.0, 1.0);
    return std::acos(c) * 180.0 / std::numbers::pi;
}

Camera look_at(const Vec3& position, int width, int height, double fov) {
    Camera c;
    c.position = position;
    c.target = Vec3::Zero();
    c.up = std::abs(position.normalized().y()) > 0.99 ? Vec3::UnitZ() : Vec3::UnitY();
    c.fov_y_degrees = fov;
    c.width = width;
    c.height = height;
    return c;
}

MapStack random_map_stack(int width, int height, std::mt19937_64& rng, double density) {
    MapStack m = empty_map_stack(width, height);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Mask* masks[4] = {&m.suggestive, &m.ridge, &m.valley, &m.apparent};
    ScalarImage* scalars[4] = {&m.dkr, &m.kmax, &m.kmin, &m.kview};
    for (int k = 0; k < 4; ++k) {
        for (std::size_t i = 0; i < m.suggestive.size(); ++i) {
            if (unit(rng) < density) {
                (*masks[k])[i] = 1;
                (*scalars[k])[i] = 0.2 + 1.8 * unit(rng);
            }
        }
    }
    for (std::size_t i = 0; i < m.contour.size(); ++i) {
        if (unit(rng) < 0.03) m.contour[i] = 1;
        if (unit(rng) < 0.03) m.boundary[i] = 1;
        m.depth[i] = unit(rng);
        for (ScalarImage& o : m.shaded) o[i] = unit(rng);
    }
    return m;
}

namespace {

// Winning map (0..3 filtered kinds, 4 contour, 5 boundary, 6 external, -1
// none) and clamp flags of one pixel; ties go to the later map.
std::pair<int, unsigned> pixel_state(const MapStack& m, std::size_t i, const std::array<double, 4>& t,
                                     bool include_boundaries, const std::optional<Drawing>& external) {
    const Mask* masks[4] = {&m.suggestive, &m.ridge, &m.valley, &m.apparent};
    const ScalarImage* scalars[4] = {&m.dkr, &m.kmax, &m.kmin, &m.kview};
    double best = 0.0;
    int winner = -1;
    unsigned active = 0;
    for (int k = 0; k < 4; ++k) {
        const double s = (*scalars[k])[i];
        if (!(*masks[k])[i] || !(s > 0.0)) continue;
        const double v = 1.0 - t[k] / s;
        if (v > 0.0) active |= 1u << k;
        if (v > 0.0 && v >= best) best = v, winner = k;
    }
    if (m.contour[i] && 1.0 >= best) best = 1.0, winner = 4;
    if (include_boundaries && m.boundary[i] && 1.0 >= best) best = 1.0, winner = 5;
    if (external && (*external)[i] > 0.0 && (*external)[i] >= best) winner = 6;
    return {winner, active};
}

}  // namespace

bool kink_free(const MapStack& maps, const std::array<double, 4>& t, bool include_boundaries,
               const std::optional<Drawing>& external, double h) {
    for (std::size_t i = 0; i < maps.contour.size(); ++i) {
        const auto centre = pixel_state(maps, i, t, include_boundaries, external);
        for (int k = 0; k < 4; ++k) {
            for (double sign : {-1.0, 1.0}) {
                std::array<double, 4> u = t;
                u[k] += sign * h;
                if (pixel_state(maps, i, u, include_boundaries, external) != centre) return false;
            }
        }
    }
    return true;
}

double linear_objective(const MapStack& maps, const std::array<double, 4>& t, bool include_boundaries,
                        const std::optional<Drawing>& external, const ScalarImage& upstream) {
    const Drawing d = merge_external(compose(maps, ThresholdSet::from_values(t, include_boundaries)), external);
    double sum = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) sum += upstream[i] * d[i];
    return sum;
}

bool SegmentGraph::all_degree_two() const {
    return std::all_of(degree.begin(), degree.end(), [](int d) { return d == 2; });
}

SegmentGraph chain_segments(const Segments& segments, double tolerance) {
    SegmentGraph g;
    std::vector<std::vector<int>> adj;
    auto node_of = [&](const Vec3& p) {
        for (std::size_t i = 0; i < g.nodes.size(); ++i)
            if ((g.nodes[i] - p).norm() <= tolerance) return static_cast<int>(i);
        g.nodes.push_back(p);
        g.degree.push_back(0);
        adj.emplace_back();
        return static_cast<int>(g.nodes.size() - 1);
    };
    for (const LineSegment3D& s : segments) {
        const int a = node_of(s.p[0]), b = node_of(s.p[1]);
        ++g.degree[a];
        ++g.degree[b];
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<int> seen(g.nodes.size(), 0);
    for (std::size_t start = 0; start < g.nodes.size(); ++start) {
        if (seen[start]) continue;
        std::vector<int> comp, stack{static_cast<int>(start)};
        seen[start] = 1;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            comp.push_back(v);
            for (int w : adj[v])
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        g.components.push_back(std::move(comp));
    }
    return g;
}

double torus_phi(const Vec3& p, double major) {
    const double rho = std::hypot(p.x(), p.z());
    return std::atan2(p.y(), rho - major);
}

}  // namespace linedraw::test
