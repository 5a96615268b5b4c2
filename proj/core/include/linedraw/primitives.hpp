#pragma once

#include <functional>

#include "linedraw/mesh.hpp"

namespace linedraw::primitives {

/// Subdivided icosahedron projected to a sphere. Subdivision level s gives
/// 20 * 4^s faces. Normals are the exact radial directions.
TriangleMesh icosphere(int subdivisions, double radius = 1.0);

/// Open tube around the Y axis, centred at the origin, without caps.
TriangleMesh cylinder(double radius, double height, int radial_segments, int height_segments);

/// Torus around the Y axis: `major` is the distance from the axis to the tube
/// centre, `minor` the tube radius. Normals are exact.
TriangleMesh torus(double major, double minor, int major_segments, int minor_segments);

/// Planar grid in z = 0 spanning [-size/2, size/2]^2, normals +Z.
TriangleMesh grid(int nx, int ny, double size);

/// Grid displaced along Z by height(x, y); normals come from the face geometry.
TriangleMesh height_field(int nx, int ny, double size, const std::function<double(double, double)>& height);

/// Axis-aligned cube with 8 vertices and 12 faces.
TriangleMesh cube(double side = 1.0);

/// Cube with edges and corners rounded by `radius`; each face is split into
/// a resolution x resolution grid before rounding.
TriangleMesh rounded_cube(double side, double radius, int resolution);

/// Removes the faces for which `drop(face_centroid)` is true, then any vertex
/// left without faces.
TriangleMesh remove_faces(const TriangleMesh& mesh, const std::function<bool(const Vec3&)>& drop);

/// Applies the rotation to positions and normals.
TriangleMesh transformed(const TriangleMesh& mesh, const Eigen::Matrix3d& rotation,
                         const Vec3& translation = Vec3::Zero(), double scale = 1.0);

}  // namespace linedraw::primitives
