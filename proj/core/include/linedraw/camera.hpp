#pragma once

#include <Eigen/Core>
#include <optional>

#include "linedraw/mesh.hpp"

namespace linedraw {

/// Pinhole camera. Pixel (i, j) covers [i, i+1) x [j, j+1) with its centre at
/// (i + 0.5, j + 0.5); image y grows downward.
struct Camera {
    Vec3 position{0.0, 0.0, 3.0};
    Vec3 target{0.0, 0.0, 0.0};
    Vec3 up{0.0, 1.0, 0.0};
    double fov_y_degrees = 50.0;
    int width = 768;
    int height = 768;

    /// Throws std::invalid_argument when the camera cannot form an image.
    void validate() const;
};

/// Result of projecting a point: screen position in pixels and view-space
/// depth (distance along the optical axis, positive in front of the camera).
struct ScreenPoint {
    double x = 0.0;
    double y = 0.0;
    double depth = 0.0;
};

/// Precomputed view transform for a validated camera.
class Projector {
public:
    explicit Projector(const Camera& camera);

    [[nodiscard]] const Camera& camera() const { return camera_; }
    /// View-space coordinates: x right, y up, z forward.
    [[nodiscard]] Vec3 to_view(const Vec3& p) const;
    [[nodiscard]] ScreenPoint project(const Vec3& p) const;
    [[nodiscard]] double focal_pixels() const { return focal_; }
    /// Depth below which geometry is treated as behind the camera.
    [[nodiscard]] double near_depth() const { return near_; }
    [[nodiscard]] const Vec3& forward() const { return forward_; }

private:
    Camera camera_;
    Vec3 right_;
    Vec3 true_up_;
    Vec3 forward_;
    double focal_ = 1.0;
    double near_ = 1e-6;
};

/// Camera on a sphere around `center`: `elevation_degrees` above the plane
/// orthogonal to `up`, `azimuth_degrees` around `up` (0 looks from the
/// reference direction, +Z for a +Y up axis), at `distance` from the centre.
Camera orbit_camera(const Vec3& center, double distance, double azimuth_degrees, double elevation_degrees,
                    const Vec3& up, double fov_y_degrees = 50.0, int width = 768, int height = 768);

/// Unit direction in the ground plane (orthogonal to `up`) for azimuth zero.
Vec3 azimuth_reference(const Vec3& up);

/// Camera looking at the surface centroid from `distance_factor` times the
/// bounding radius. Up defaults to the mesh's up axis, else +Y.
Camera default_camera(const TriangleMesh& mesh, double azimuth_degrees = 0.0, double elevation_degrees = 30.0,
                      double distance_factor = 2.5, int width = 768, int height = 768, double fov_y_degrees = 50.0);

}  // namespace linedraw
