#include "linedraw/camera.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Geometry>

namespace linedraw {

namespace {

double radians(double degrees) { return degrees * std::numbers::pi / 180.0; }

}  // namespace

void Camera::validate() const {
    if (width <= 0 || height <= 0) throw std::invalid_argument("camera image size must be positive");
    if (!((position - target).norm() > 0.0)) throw std::invalid_argument("camera position equals target");
    if (!(fov_y_degrees > 0.0 && fov_y_degrees < 180.0)) throw std::invalid_argument("field of view out of range");
    if (!(up.norm() > 0.0)) throw std::invalid_argument("camera up vector is zero");
    if (!position.allFinite() || !target.allFinite()) throw std::invalid_argument("camera is not finite");
}

Projector::Projector(const Camera& camera) : camera_(camera) {
    camera_.validate();
    forward_ = (camera_.target - camera_.position).normalized();
    Vec3 up = camera_.up.normalized();
    if (std::abs(up.dot(forward_)) > 1.0 - 1e-9) {
        // Looking along the up axis: any perpendicular will do.
        up = std::abs(forward_.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitZ();
    }
    right_ = forward_.cross(up).normalized();
    true_up_ = right_.cross(forward_);
    focal_ = 0.5 * camera_.height / std::tan(0.5 * radians(camera_.fov_y_degrees));
    near_ = 1e-6 * (camera_.target - camera_.position).norm();
}

Vec3 Projector::to_view(const Vec3& p) const {
    const Vec3 d = p - camera_.position;
    return {d.dot(right_), d.dot(true_up_), d.dot(forward_)};
}

ScreenPoint Projector::project(const Vec3& p) const {
    const Vec3 v = to_view(p);
    const double z = v.z();
    return {0.5 * camera_.width + focal_ * v.x() / z, 0.5 * camera_.height - focal_ * v.y() / z, z};
}

Vec3 azimuth_reference(const Vec3& up) {
    const Vec3 u = up.normalized();
    const Vec3 ref = std::abs(u.dot(Vec3::UnitZ())) < 0.9 ? Vec3::UnitZ() : Vec3::UnitX();
    return (ref - ref.dot(u) * u).normalized();
}

Camera orbit_camera(const Vec3& center, double distance, double azimuth_degrees, double elevation_degrees,
                    const Vec3& up, double fov_y_degrees, int width, int height) {
    if (!(distance > 0.0)) throw std::invalid_argument("camera distance must be positive");
    const Vec3 u = up.normalized();
    const Vec3 a = azimuth_reference(u);
    const Vec3 b = u.cross(a);
    const double az = radians(azimuth_degrees);
    const double el = radians(elevation_degrees);
    const Vec3 dir = std::cos(el) * (std::cos(az) * a + std::sin(az) * b) + std::sin(el) * u;
    Camera camera;
    camera.position = center + distance * dir;
    camera.target = center;
    camera.up = u;
    camera.fov_y_degrees = fov_y_degrees;
    camera.width = width;
    camera.height = height;
    return camera;
}

Camera default_camera(const TriangleMesh& mesh, double azimuth_degrees, double elevation_degrees,
                      double distance_factor, int width, int height, double fov_y_degrees) {
    const Vec3 center = surface_centroid(mesh);
    double radius = bounding_radius(mesh, center);
    if (!(radius > 0.0)) radius = 1.0;
    const Vec3 up = mesh.up_axis.value_or(Vec3::UnitY());
    return orbit_camera(center, distance_factor * radius, azimuth_degrees, elevation_degrees, up, fov_y_degrees,
                        width, height);
}

}  // namespace linedraw
