#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "linedraw/camera.hpp"
#include "linedraw/curvature.hpp"
#include "linedraw/mesh.hpp"

namespace linedraw {

enum class LineKind : std::uint8_t { Contour, Boundary, Crease, Suggestive, Ridge, Valley, Apparent };

inline constexpr std::array<LineKind, 7> all_line_kinds = {LineKind::Contour,    LineKind::Boundary, LineKind::Crease,
                                                           LineKind::Suggestive, LineKind::Ridge,    LineKind::Valley,
                                                           LineKind::Apparent};

std::string_view kind_name(LineKind kind);
LineKind kind_from_name(std::string_view name);

/// A straight piece of a line generator lying on face `face` of the source
/// mesh. `scalar` holds the filter value at each endpoint (1 for kinds that
/// have no filter).
struct LineSegment3D {
    std::array<Vec3, 2> p;
    std::array<double, 2> scalar{1.0, 1.0};
    LineKind kind = LineKind::Contour;
    int face = -1;

    [[nodiscard]] double length() const { return (p[1] - p[0]).norm(); }
};

using Segments = std::vector<LineSegment3D>;

/// Segments shorter than this (object units) are discarded.
inline constexpr double min_segment_length = 1e-6;

/// Zero set of g(v) = n(v) . (eye - v), linearly interpolated along edges.
/// Crossing points are computed per edge, so segments on neighbouring faces
/// share endpoints exactly.
Segments occluding_contours(const TriangleMesh& mesh, const Vec3& eye);

/// Boundary edges (one incident face) and crease edges (dihedral angle above
/// `crease_angle_degrees`).
Segments boundaries_and_creases(const TriangleMesh& mesh, double crease_angle_degrees = 60.0);

/// Zero set of the radial curvature on faces with at least one front-facing
/// vertex. A segment is kept only if the interpolated derivative is positive
/// at both endpoints; the scalar is that derivative.
Segments suggestive_contours(const TriangleMesh& mesh, const RadialCurvature& radial);

/// Vertices with k1 - k2 at or below this fraction of |k1| + |k2| are
/// umbilic: they have no principal direction and carry no ridge or valley.
inline constexpr double umbilic_tolerance = 1e-6;

/// Ridges (maxima of k1 along e1 where k1 > |k2|, scalar k1) and valleys
/// (minima of k2 along e2 where k2 < -|k1|, scalar |k2|). Independent of the
/// camera. Requires the derivative tensor.
Segments ridges_valleys(const TriangleMesh& mesh, const CurvatureField& field);

/// Maxima of the view-dependent curvature along its own direction on faces
/// with a front-facing vertex; scalar kt.
Segments apparent_ridges(const TriangleMesh& mesh, const CurvatureField& field, const ViewDependentField& viewdep);

/// Keeps the segments of one kind.
Segments select_kind(const Segments& segments, LineKind kind);

/// One record per line: `kind x1 y1 z1 s1 x2 y2 z2 s2`.
void write_segments(std::ostream& out, const Segments& segments);
void write_segments(const std::filesystem::path& path, const Segments& segments);

}  // namespace linedraw
