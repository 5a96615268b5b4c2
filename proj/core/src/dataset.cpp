#include "linedraw/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "linedraw/image_io.hpp"
#include "linedraw/parallel.hpp"
#include "linedraw/raster.hpp"

namespace linedraw {

CameraPlacement place_cameras(const TriangleMesh& mesh, std::uint64_t seed, int width, int height,
                              double fov_y_degrees) {
    CameraPlacement out;
    out.default_up_used = !mesh.up_axis.has_value();
    const Vec3 up = mesh.up_axis.value_or(Vec3::UnitY());
    const Vec3 center = surface_centroid(mesh);
    double radius = bounding_radius(mesh, center);
    if (!(radius > 0.0)) radius = 1.0;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> azimuth(0.0, 360.0);
    const double a0 = azimuth(rng);
    double a1 = azimuth(rng);
    auto separation = [](double a, double b) {
        const double d = std::fmod(std::abs(a - b), 360.0);
        return std::min(d, 360.0 - d);
    };
    while (separation(a0, a1) < min_azimuth_separation_degrees) a1 = azimuth(rng);
    out.azimuths_degrees = {a0, a1};
    for (int i = 0; i < 2; ++i)
        out.cameras[i] = orbit_camera(center, camera_distance_factor * radius, out.azimuths_degrees[i],
                                      camera_elevation_degrees, up, fov_y_degrees, width, height);
    return out;
}

Provenance candidate_provenance(int index, const CandidateLadder& ladder, const EdgeSettings& edges) {
    if (index < 0 || index >= candidate_count) throw std::out_of_range("candidate index out of range");
    Provenance p;
    p.index = index;
    if (index < geometric_candidate_count) {
        int r = index;
        p.borders = r % 2 == 1;
        r /= 2;
        p.creases = r % 2 == 1;
        r /= 2;
        p.ridge_valley_level = r % 4;
        r /= 4;
        p.apparent_level = r % 4;
        r /= 4;
        p.suggestive_level = r;
        const double rv = ladder.ridge_valley[p.ridge_valley_level];
        p.thresholds = ThresholdSet{ladder.suggestive[p.suggestive_level], rv, rv, ladder.apparent[p.apparent_level],
                                    p.borders};
        return p;
    }
    const int e = index - geometric_candidate_count;
    p.geometric = false;
    p.edge_level = e % 4;
    p.edge_method = e < 4 ? "canny" : "canny_2sigma";
    p.edge_high = edges.high[p.edge_level];
    p.edge_low = edges.low_ratio * p.edge_high;
    p.edge_sigma = e < 4 ? edges.sigma : 2.0 * edges.sigma;
    return p;
}

Drawing render_candidate(const MapStack& maps, const Provenance& p) {
    if (!p.geometric) return canny_lines(maps.shaded[0], p.edge_low, p.edge_high, p.edge_sigma);
    Drawing d = compose(maps, p.thresholds);
    if (p.creases)
        for (std::size_t i = 0; i < d.size(); ++i)
            if (maps.crease[i]) d[i] = 1.0;
    return d;
}

CandidateSet generate_candidates(const MapStack& maps, const CandidateLadder& ladder, const EdgeSettings& edges) {
    maps.validate();
    CandidateSet set;
    set.drawings.resize(candidate_count);
    set.provenance.resize(candidate_count);
    for (int i = 0; i < candidate_count; ++i) set.provenance[i] = candidate_provenance(i, ladder, edges);
    parallel_for(static_cast<std::size_t>(candidate_count),
                 [&](std::size_t i) { set.drawings[i] = render_candidate(maps, set.provenance[i]); });
    return set;
}

std::vector<double> chamfer_matrix(const std::vector<BinaryDrawing>& drawings) {
    const std::size_t n = drawings.size();
    for (const BinaryDrawing& d : drawings) {
        require_same_shape(drawings[0].pixels, d.pixels, "candidate drawings");
        if (d.empty()) throw std::domain_error("undefined Chamfer");
    }
    // directed[i * n + j] = mean distance from drawing i to drawing j; one
    // distance transform per column keeps memory bounded.
    std::vector<double> directed(n * n, 0.0);
    parallel_for(n, [&](std::size_t j) {
        const ScalarImage dist = distance_to(drawings[j].pixels);
        for (std::size_t i = 0; i < n; ++i)
            if (i != j) directed[i * n + j] = directed_chamfer(drawings[i], dist);
    });
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) d[i * n + j] = d[j * n + i] = 0.5 * (directed[i * n + j] + directed[j * n + i]);
    return d;
}

double kmedoids_cost(const std::vector<double>& distances, std::size_t n, const std::vector<std::size_t>& medoids) {
    if (medoids.empty()) throw std::invalid_argument("no medoids");
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t m : medoids) best = std::min(best, distances[i * n + m]);
        cost += best;
    }
    return cost;
}

KMedoidsResult pam(const std::vector<double>& distances, std::size_t n, std::size_t k) {
    if (distances.size() != n * n) throw std::invalid_argument("distance matrix size mismatch");
    if (k == 0 || k > n) throw std::invalid_argument("k must be in [1, n]");
    KMedoidsResult r;
    std::vector<char> chosen(n, 0);
    std::vector<std::size_t> medoids;
    // Greedy build.
    for (std::size_t step = 0; step < k; ++step) {
        std::size_t best = n;
        double best_cost = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < n; ++c) {
            if (chosen[c]) continue;
            medoids.push_back(c);
            const double cost = kmedoids_cost(distances, n, medoids);
            medoids.pop_back();
            if (cost < best_cost) {
                best_cost = cost;
                best = c;
            }
        }
        medoids.push_back(best);
        chosen[best] = 1;
    }
    double cost = kmedoids_cost(distances, n, medoids);
    r.build_cost = cost;
    // Best-improvement swaps.
    for (;;) {
        double best_cost = cost;
        std::size_t best_slot = k, best_point = n;
        for (std::size_t slot = 0; slot < k; ++slot) {
            const std::size_t old = medoids[slot];
            for (std::size_t o = 0; o < n; ++o) {
                if (chosen[o]) continue;
                medoids[slot] = o;
                const double c = kmedoids_cost(distances, n, medoids);
                if (c < best_cost) {
                    best_cost = c;
                    best_slot = slot;
                    best_point = o;
                }
            }
            medoids[slot] = old;
        }
        if (best_slot == k || !(best_cost < cost - 1e-12 * std::max(1.0, std::abs(cost)))) break;
        chosen[medoids[best_slot]] = 0;
        chosen[best_point] = 1;
        medoids[best_slot] = best_point;
        cost = best_cost;
        ++r.swaps;
    }
    std::sort(medoids.begin(), medoids.end());
    r.medoids = medoids;
    r.cost = kmedoids_cost(distances, n, medoids);
    return r;
}

Selection select_distinct(const std::vector<Drawing>& candidates, std::size_t k) {
    std::vector<BinaryDrawing> binary(candidates.size());
    parallel_for(candidates.size(), [&](std::size_t i) { binary[i] = binarize(candidates[i]); });
    Selection s;
    std::vector<std::size_t> kept;
    std::vector<BinaryDrawing> nonempty;
    for (std::size_t i = 0; i < binary.size(); ++i) {
        if (binary[i].empty()) {
            s.dropped_empty.push_back(i);
        } else {
            kept.push_back(i);
            nonempty.push_back(std::move(binary[i]));
        }
    }
    if (nonempty.size() < k || k == 0)
        throw std::invalid_argument("fewer than k nonempty candidates (" + std::to_string(nonempty.size()) + " < " +
                                    std::to_string(k) + ")");
    const std::vector<double> d = chamfer_matrix(nonempty);
    const KMedoidsResult r = pam(d, nonempty.size(), k);
    for (std::size_t m : r.medoids) s.selected.push_back(kept[m]);
    s.cost = r.cost;
    s.build_cost = r.build_cost;
    return s;
}

namespace {

nlohmann::json number_or_off(double v) {
    if (std::isfinite(v)) return v;
    return "off";
}

nlohmann::json ladder_json(const std::array<double, 4>& values) {
    nlohmann::json j = nlohmann::json::array();
    for (double v : values) j.push_back(number_or_off(v));
    return j;
}

nlohmann::json vec_json(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

nlohmann::json provenance_json(const Provenance& p) {
    nlohmann::json j = {{"index", p.index}, {"source", p.geometric ? "geometric" : "edge"}};
    if (p.geometric) {
        j["levels"] = {{"suggestive", p.suggestive_level},
                       {"apparent", p.apparent_level},
                       {"ridge_valley", p.ridge_valley_level}};
        j["creases"] = p.creases;
        j["borders"] = p.borders;
        j["thresholds"] = {{"t_S", number_or_off(p.thresholds.t_s)},
                           {"t_R", number_or_off(p.thresholds.t_r)},
                           {"t_V", number_or_off(p.thresholds.t_v)},
                           {"t_A", number_or_off(p.thresholds.t_a)}};
    } else {
        j["method"] = p.edge_method;
        j["level"] = p.edge_level;
        j["low"] = p.edge_low;
        j["high"] = p.edge_high;
        j["sigma"] = p.edge_sigma;
        j["image"] = "O1";
    }
    return j;
}

}  // namespace

void write_candidate_set(const std::filesystem::path& root, const std::string& shape, const std::string& view,
                         const CandidateSet& set, const Selection& selection, const Camera& camera,
                         const CandidateLadder& ladder, const EdgeSettings& edges, std::uint64_t seed) {
    const std::filesystem::path dir = root / shape / view;
    std::filesystem::create_directories(dir);
    nlohmann::json candidates = nlohmann::json::array();
    for (std::size_t i = 0; i < set.drawings.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "candidate_%03zu.png", i);
        write_drawing_png(dir / name, set.drawings[i]);
        nlohmann::json p = provenance_json(set.provenance[i]);
        p["file"] = name;
        candidates.push_back(std::move(p));
    }
    const nlohmann::json manifest = {
        {"shape", shape},
        {"view", view},
        {"seed", seed},
        {"camera",
         {{"position", vec_json(camera.position)},
          {"target", vec_json(camera.target)},
          {"up", vec_json(camera.up)},
          {"fov_y_degrees", camera.fov_y_degrees},
          {"width", camera.width},
          {"height", camera.height}}},
        {"ladder",
         {{"suggestive", ladder_json(ladder.suggestive)},
          {"apparent", ladder_json(ladder.apparent)},
          {"ridge_valley", ladder_json(ladder.ridge_valley)}}},
        {"edge_thresholds", {{"high", edges.high}, {"low_ratio", edges.low_ratio}, {"sigma", edges.sigma}}},
        {"candidate_count", set.drawings.size()},
        {"candidates", candidates},
        {"selected", selection.selected},
        {"dropped_empty", selection.dropped_empty},
        {"selection_cost", selection.cost},
    };
    std::ofstream out(dir / "manifest.json");
    if (!out) throw std::runtime_error("cannot write manifest in " + dir.string());
    out << manifest.dump(2) << '\n';
}

}  // namespace linedraw
