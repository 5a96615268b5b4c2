#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "linedraw/camera.hpp"
#include "linedraw/eval.hpp"
#include "linedraw/filter.hpp"
#include "linedraw/map_stack.hpp"

namespace linedraw {

struct CameraPlacement {
    std::array<Camera, 2> cameras;
    std::array<double, 2> azimuths_degrees{};
    /// The mesh had no up axis and +Y was assumed.
    bool default_up_used = false;
};

inline constexpr double camera_elevation_degrees = 30.0;
inline constexpr double camera_distance_factor = 2.5;
inline constexpr double min_azimuth_separation_degrees = 5.0;

/// Two cameras at 30 degrees elevation aimed at the surface centroid, at
/// 2.5x the bounding radius, with seeded random azimuths at least 5 degrees
/// apart.
CameraPlacement place_cameras(const TriangleMesh& mesh, std::uint64_t seed, int width = 768, int height = 768,
                              double fov_y_degrees = 50.0);

/// Threshold ladders (4 values each, infinity = off). Ridges and valleys
/// share one ladder entry.
struct CandidateLadder {
    std::array<double, 4> suggestive{0.05, 0.2, 0.6, threshold_off};
    std::array<double, 4> apparent{0.05, 0.2, 0.6, threshold_off};
    std::array<double, 4> ridge_valley{0.05, 0.2, 0.6, threshold_off};
};

struct EdgeSettings {
    /// Canny high thresholds on [0,1] intensities; low = low_ratio * high.
    std::array<double, 4> high{0.05, 0.1, 0.2, 0.4};
    double low_ratio = 0.4;
    /// Blur sigma of the first family; the second family uses twice this.
    double sigma = 1.0;
};

inline constexpr int geometric_candidate_count = 256;
inline constexpr int edge_candidate_count = 8;
inline constexpr int candidate_count = geometric_candidate_count + edge_candidate_count;

struct Provenance {
    int index = 0;
    bool geometric = true;
    // Geometric candidates.
    int suggestive_level = 0;
    int apparent_level = 0;
    int ridge_valley_level = 0;
    bool creases = false;
    bool borders = false;
    ThresholdSet thresholds;
    // Edge candidates: "canny" on O_1, or "canny_2sigma" standing in for the
    // edge-preserving-filter family.
    std::string edge_method;
    int edge_level = 0;
    double edge_low = 0.0;
    double edge_high = 0.0;
    double edge_sigma = 0.0;
};

/// Provenance of candidate `index` (0..263): geometric candidates are
/// ordered by (suggestive, apparent, ridge/valley, creases, borders) level,
/// then the 4 Canny drawings, then the 4 doubled-sigma Canny drawings.
Provenance candidate_provenance(int index, const CandidateLadder& ladder, const EdgeSettings& edges);

/// Re-renders a candidate from its provenance record.
Drawing render_candidate(const MapStack& maps, const Provenance& provenance);

struct CandidateSet {
    std::vector<Drawing> drawings;
    std::vector<Provenance> provenance;
};

CandidateSet generate_candidates(const MapStack& maps, const CandidateLadder& ladder = {},
                                 const EdgeSettings& edges = {});

/// Symmetric Chamfer distances between drawings (row-major n x n, zero
/// diagonal). All drawings must be nonempty.
std::vector<double> chamfer_matrix(const std::vector<BinaryDrawing>& drawings);

struct KMedoidsResult {
    std::vector<std::size_t> medoids;  // ascending
    double cost = 0.0;
    double build_cost = 0.0;
    int swaps = 0;
};

/// Sum over points of the distance to the nearest medoid.
double kmedoids_cost(const std::vector<double>& distances, std::size_t n, const std::vector<std::size_t>& medoids);

/// PAM: greedy build, then best-improvement swaps until none lowers the
/// cost. Ties go to the lowest index.
KMedoidsResult pam(const std::vector<double>& distances, std::size_t n, std::size_t k);

struct Selection {
    /// Indices into the original candidate list, ascending.
    std::vector<std::size_t> selected;
    /// Candidates dropped because they binarize to nothing.
    std::vector<std::size_t> dropped_empty;
    double cost = 0.0;
    double build_cost = 0.0;
};

/// Binarizes the candidates, drops empty ones, and picks k medoids under the
/// symmetric Chamfer distance. Throws if fewer than k remain.
Selection select_distinct(const std::vector<Drawing>& candidates, std::size_t k);

/// Writes <root>/<shape>/<view>/candidate_###.png and manifest.json.
void write_candidate_set(const std::filesystem::path& root, const std::string& shape, const std::string& view,
                         const CandidateSet& set, const Selection& selection, const Camera& camera,
                         const CandidateLadder& ladder, const EdgeSettings& edges, std::uint64_t seed);

}  // namespace linedraw
