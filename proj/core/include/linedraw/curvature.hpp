#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "linedraw/camera.hpp"
#include "linedraw/mesh.hpp"

namespace linedraw {

/// Per-vertex principal curvatures and frames. Curvature is positive where
/// the surface bends away from its normal (a sphere with outward normals has
/// positive curvature). (e1, e2, n) is a right-handed orthonormal frame.
///
/// `dcurv` holds the four unique components of the curvature derivative
/// tensor C in the (e1, e2) frame: C(e1,e1,e1), C(e1,e1,e2), C(e1,e2,e2),
/// C(e2,e2,e2).
struct CurvatureField {
    std::vector<double> k1;
    std::vector<double> k2;
    std::vector<Vec3> e1;
    std::vector<Vec3> e2;
    std::vector<Vec3> normals;
    std::vector<std::array<double, 4>> dcurv;
    /// Vertices without incident area; their curvature is zero.
    std::vector<std::uint8_t> isolated;
    double percentile_scale = 1.0;
    bool normalized = false;
    /// Set when normalization met an all-zero field and left it unchanged.
    bool zero_field = false;

    [[nodiscard]] std::size_t size() const { return k1.size(); }
    [[nodiscard]] bool has_derivative() const { return dcurv.size() == k1.size() && !k1.empty(); }
};

/// Voronoi area of each triangle corner (obtuse triangles use the clamped
/// split), indexed [face][corner].
std::vector<std::array<double, 3>> corner_areas(const TriangleMesh& mesh);

CurvatureField principal_curvatures(const TriangleMesh& mesh);
CurvatureField curvature_derivative(const TriangleMesh& mesh, const CurvatureField& field);

/// principal_curvatures followed by curvature_derivative.
CurvatureField compute_curvature(const TriangleMesh& mesh);

/// Nearest-rank percentile (p in (0, 100]) of the given values.
double nearest_rank_percentile(std::vector<double> values, double p);

/// Divides k1, k2 by s = P90(|k1|) and the derivative tensor by s^2, which
/// keeps derived quantities such as the radial-curvature derivative
/// consistent. An all-zero field is returned unchanged with `zero_field` set.
CurvatureField normalize_percentile(const CurvatureField& field);

/// Unit vectors from each vertex towards the camera position.
std::vector<Vec3> view_directions(const TriangleMesh& mesh, const Vec3& eye);

struct RadialCurvature {
    std::vector<double> kr;
    std::vector<double> dkr;
    std::vector<double> ndotv;
    /// View direction parallel to the normal: kr taken along e1, dkr = 0.
    std::vector<std::uint8_t> degenerate;
};

/// Normal curvature along the tangent projection w of the view vector and its
/// directional derivative along w, including the term from the view vector
/// turning as the point moves.
RadialCurvature radial_curvature(const CurvatureField& field, std::span<const Vec3> view_dirs);

/// The two quantities at one vertex, with (u, v) the view components along
/// (e1, e2) and ndotv the normal component of the unit view vector.
struct RadialSample {
    double kr = 0.0;
    double dkr = 0.0;
    bool degenerate = false;
};
RadialSample radial_curvature_at(double k1, double k2, const std::array<double, 4>& dcurv, double u, double v,
                                 double ndotv);

/// Largest singular value of the screen-projected shape operator and its
/// maximizing direction (unit 2-vector in the (e1, e2) frame).
struct ViewDependentField {
    std::vector<double> kt;
    std::vector<Vec2> direction;
    /// Derivative of kt along `direction`, foreshortened by |n.v|.
    std::vector<double> derivative;
    std::vector<double> ndotv;
    double percentile_scale = 1.0;
    bool normalized = false;
    bool zero_field = false;
};

struct ViewDependentSample {
    double kt = 0.0;
    Vec2 direction{1.0, 0.0};
};
/// Evaluates the view-projected shape operator at one vertex. |ndotv| is
/// clamped to at least 1e-3 so contour-generator vertices stay finite.
ViewDependentSample view_dependent_at(double k1, double k2, double u, double v, double ndotv);

ViewDependentField view_dependent_curvature(const CurvatureField& field, const TriangleMesh& mesh,
                                            const Camera& camera);

/// Divides kt and its derivative by P90(kt), or by `joint_scale` when given
/// (to share the scale of the principal curvatures).
ViewDependentField normalize_percentile(const ViewDependentField& field, std::optional<double> joint_scale = {});

/// Flat dump of k1, k2, e1, e2, dcurv and the isolated flag (13 channels per vertex).
void write_curvature_dump(const std::filesystem::path& path, const CurvatureField& field);

}  // namespace linedraw
