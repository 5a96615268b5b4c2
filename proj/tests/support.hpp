#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <random>
#include <string>

#include <Eigen/Geometry>

#include "linedraw/camera.hpp"
#include "linedraw/image.hpp"
#include "linedraw/lines.hpp"
#include "linedraw/map_stack.hpp"
#include "linedraw/mesh.hpp"

namespace linedraw::test {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    [[nodiscard]] const std::filesystem::path& path() const { return path_; }
    [[nodiscard]] std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

Eigen::Matrix3d rotation(const Vec3& axis, double degrees);
double angle_degrees(const Vec3& a, const Vec3& b);

/// Camera at `position` looking at the origin.
Camera look_at(const Vec3& position, int width = 256, int height = 256, double fov = 50.0);

/// Map stack of the given size with random sparse masks and scalars in
/// [0.2, 2], random depth/shading, and disjoint-ish contour/boundary pixels.
MapStack random_map_stack(int width, int height, std::mt19937_64& rng, double density = 0.15);

/// True when no pixel changes clamp state or winning map between t and
/// t +/- h along any single axis, so central differences of I(t) are exact.
bool kink_free(const MapStack& maps, const std::array<double, 4>& t, bool include_boundaries,
               const std::optional<Drawing>& external, double h);

/// Sum over pixels of upstream * I(t), with I the merged drawing.
double linear_objective(const MapStack& maps, const std::array<double, 4>& t, bool include_boundaries,
                        const std::optional<Drawing>& external, const ScalarImage& upstream);

/// Bit-level equality of two images.
template <typename T>
bool identical(const Image<T>& a, const Image<T>& b) {
    return a.width() == b.width() && a.height() == b.height() && a == b;
}

/// Segment endpoints merged within `tolerance` into graph nodes.
struct SegmentGraph {
    std::vector<Vec3> nodes;
    std::vector<int> degree;
    std::vector<std::vector<int>> components;  // node indices per connected component
    [[nodiscard]] bool all_degree_two() const;
};
SegmentGraph chain_segments(const Segments& segments, double tolerance);

/// Tube parameter (angle around the tube, radians) of a point on a Y-axis torus.
double torus_phi(const Vec3& p, double major);

}  // namespace linedraw::test
