#pragma once

#include <array>
#include <filesystem>

#include "linedraw/camera.hpp"
#include "linedraw/curvature.hpp"
#include "linedraw/image.hpp"
#include "linedraw/lines.hpp"
#include "linedraw/raster.hpp"

namespace linedraw {

/// Image-space inputs of the drawing model for one mesh and view.
struct MapStack {
    int width = 0;
    int height = 0;
    // Binary line masks.
    Mask suggestive;  // S
    Mask ridge;       // R
    Mask valley;      // V
    Mask apparent;    // A
    Mask contour;     // C
    Mask boundary;    // B
    Mask crease;      // only used by candidate generation
    // Filter scalars, positive exactly on the matching mask.
    ScalarImage dkr;    // suggestive-contour derivative
    ScalarImage kmax;   // ridge curvature k1
    ScalarImage kmin;   // valley curvature |k2|
    ScalarImage kview;  // view-dependent curvature kt
    ScalarImage depth;  // E
    std::array<ScalarImage, 6> shaded;  // O_1..O_6

    /// Throws std::invalid_argument if any member has another shape.
    void validate() const;
    /// True when no line mask has a set pixel.
    [[nodiscard]] bool lines_empty() const;
};

/// Blank stack with every image allocated.
MapStack empty_map_stack(int width, int height);

struct PipelineOptions {
    double crease_angle_degrees = 60.0;
    LineRasterOptions raster;
    /// Normalize kt by the principal-curvature scale instead of its own 90th percentile.
    bool joint_view_normalization = false;
};

/// Everything computed in object space for one view.
struct LineGeometry {
    CurvatureField curvature;  // percentile-normalized
    RadialCurvature radial;
    ViewDependentField viewdep;  // percentile-normalized
    Segments contours;
    Segments boundaries;
    Segments creases;
    Segments suggestive;
    Segments ridges;
    Segments valleys;
    Segments apparent;

    [[nodiscard]] Segments all() const;
};

/// Curvature of a mesh normalized by its 90th percentile; independent of the view.
CurvatureField normalized_curvature(const TriangleMesh& mesh);

LineGeometry extract_lines(const TriangleMesh& mesh, const CurvatureField& curvature, const Camera& camera,
                           const PipelineOptions& options = {});
LineGeometry extract_lines(const TriangleMesh& mesh, const Camera& camera, const PipelineOptions& options = {});

MapStack build_map_stack(const TriangleMesh& mesh, const LineGeometry& lines, const Camera& camera,
                         const PipelineOptions& options = {});
MapStack build_map_stack(const TriangleMesh& mesh, const Camera& camera, const PipelineOptions& options = {});

/// Writes each map as `<name>.ldf` flat float files into `dir`.
void dump_map_stack(const std::filesystem::path& dir, const MapStack& maps);

}  // namespace linedraw
