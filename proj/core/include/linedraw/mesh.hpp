#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace linedraw {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Face = std::array<int, 3>;

/// Indexed triangle surface. Faces are counter-clockwise when seen from the
/// front side; normals are unit length.
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<Face> faces;
    std::vector<Vec3> normals;
    std::optional<Vec3> up_axis;

    [[nodiscard]] std::size_t vertex_count() const { return vertices.size(); }
    [[nodiscard]] std::size_t face_count() const { return faces.size(); }
};

class MeshError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// What the loader had to repair. Rendered as `key=value` lines by to_string().
struct MeshDiagnostics {
    std::size_t parsed_vertices = 0;
    std::size_t parsed_faces = 0;
    std::size_t welded_vertices = 0;
    std::size_t degenerate_faces_removed = 0;
    std::size_t boundary_edges = 0;
    std::size_t non_manifold_edges = 0;
    std::size_t components = 0;
    std::size_t flipped_faces = 0;
    std::size_t isolated_vertices = 0;
    bool normals_from_file = false;

    [[nodiscard]] bool non_manifold() const { return non_manifold_edges > 0; }
    [[nodiscard]] std::string to_string() const;
};

struct LoadedMesh {
    TriangleMesh mesh;
    MeshDiagnostics diagnostics;
};

/// Reads a Wavefront OBJ (v / vn / f records; polygons are fan-triangulated),
/// welds coincident vertices, drops degenerate faces and orients faces
/// consistently. Throws MeshError on parse failure or when there are no faces.
LoadedMesh load_mesh(const std::filesystem::path& path);
LoadedMesh parse_obj(std::istream& in);

void write_obj(const std::filesystem::path& path, const TriangleMesh& mesh);

/// Merges vertices closer than `tolerance`; the first vertex of each cluster is
/// kept. Faces that collapse are removed. Normals are recomputed when the
/// vertex count changes.
/// `remap`, when given, receives the output index of every input vertex.
TriangleMesh weld_vertices(const TriangleMesh& mesh, double tolerance, MeshDiagnostics* diagnostics = nullptr,
                           std::vector<int>* remap = nullptr);

/// Default welding tolerance: 1e-6 of the bounding-box diagonal.
double default_weld_tolerance(const TriangleMesh& mesh);

/// Flips faces so that neighbours agree, then turns closed components outward.
TriangleMesh orient_faces(const TriangleMesh& mesh, MeshDiagnostics* diagnostics = nullptr);

/// Centres the bounding box at the origin and scales so the longest extent is 1.
TriangleMesh normalize_size(const TriangleMesh& mesh);

std::vector<Vec3> area_weighted_normals(const std::vector<Vec3>& vertices, const std::vector<Face>& faces);

struct BoundingBox {
    Vec3 min;
    Vec3 max;
    [[nodiscard]] Vec3 extent() const { return max - min; }
    [[nodiscard]] Vec3 center() const { return 0.5 * (min + max); }
};
BoundingBox bounding_box(const TriangleMesh& mesh);

/// Area-weighted surface centroid (vertex mean for meshes with no area).
Vec3 surface_centroid(const TriangleMesh& mesh);
double bounding_radius(const TriangleMesh& mesh, const Vec3& center);
double mean_edge_length(const TriangleMesh& mesh);

/// Undirected edge with up to two incident faces recorded; `face_count` keeps
/// the true incidence so non-manifold edges can be detected.
struct Edge {
    int a = 0;  // a < b
    int b = 0;
    int face0 = -1;
    int face1 = -1;
    int face_count = 0;
};

/// Edges sorted by (a, b).
std::vector<Edge> build_edges(const TriangleMesh& mesh);

/// Sorted one-ring vertex neighbours.
std::vector<std::vector<int>> vertex_neighbors(const TriangleMesh& mesh);

/// Faces incident to each vertex, in increasing face order.
std::vector<std::vector<int>> vertex_faces(const TriangleMesh& mesh);

struct NormalField {
    std::vector<Vec3> normals;
    double sigma = 0.0;
};

/// Distance unit of normal smoothing as a fraction of the mean edge length:
/// sigma = 5 spans one mean edge.
inline constexpr double normal_smoothing_unit = 0.2;

/// One-ring Gaussian smoothing of the vertex normals. Each neighbour normal is
/// weighted by exp(-d^2 / (2 sigma^2)) where d is the vertex distance measured
/// in units of normal_smoothing_unit mean edge lengths; the vertex's own
/// normal has weight 1. sigma == 0 returns the mesh normals unchanged.
NormalField smooth_normals(const TriangleMesh& mesh, double sigma);

}  // namespace linedraw
