#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>

#include "linedraw/dataset.hpp"
#include "linedraw/eval.hpp"
#include "linedraw/image_io.hpp"
#include "linedraw/map_stack.hpp"
#include "linedraw/mesh.hpp"
#include "linedraw/optimize.hpp"
#include "linedraw/ranker.hpp"

namespace linedraw::cli {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

void warn(const std::string& key, const std::string& detail) {
    std::cerr << json{{"warning", key}, {"detail", detail}}.dump() << '\n';
}

Vec3 to_vec3(const std::vector<double>& v, const char* name) {
    if (v.size() != 3) throw InputError("bad option", std::string(name) + " needs 3 values");
    return {v[0], v[1], v[2]};
}

json threshold_json(double t) { return std::isinf(t) ? json("off") : json(t); }

json thresholds_json(const ThresholdSet& t) {
    return {{"t_S", threshold_json(t.t_s)},
            {"t_R", threshold_json(t.t_r)},
            {"t_V", threshold_json(t.t_v)},
            {"t_A", threshold_json(t.t_a)},
            {"boundaries", t.include_boundaries}};
}

json camera_json(const Camera& c) {
    return {{"position", {c.position.x(), c.position.y(), c.position.z()}},
            {"target", {c.target.x(), c.target.y(), c.target.z()}},
            {"up", {c.up.x(), c.up.y(), c.up.z()}},
            {"fov_y_degrees", c.fov_y_degrees},
            {"width", c.width},
            {"height", c.height}};
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

fs::path output_dir(const std::string& out) {
    if (out.empty()) throw InputError("bad option", "--out is required");
    fs::create_directories(out);
    return out;
}

TriangleMesh load_input_mesh(const ViewOptions& view) {
    if (view.mesh.empty()) throw InputError("bad option", "--mesh is required");
    if (!fs::exists(view.mesh)) throw InputError("mesh not found", view.mesh);
    LoadedMesh loaded;
    try {
        loaded = load_mesh(view.mesh);
    } catch (const MeshError& e) {
        throw InputError("bad mesh", e.what());
    }
    if (loaded.diagnostics.non_manifold()) warn("non-manifold mesh", loaded.diagnostics.to_string());
    if (!view.up_axis.empty()) {
        const Vec3 up = to_vec3(view.up_axis, "--up-axis");
        if (!(up.norm() > 0.0)) throw InputError("bad option", "--up-axis must be nonzero");
        loaded.mesh.up_axis = up.normalized();
    }
    return std::move(loaded.mesh);
}

Camera resolve_camera(const TriangleMesh& mesh, const ViewOptions& view, std::uint64_t seed) {
    Camera camera;
    if (!view.position.empty()) {
        camera.position = to_vec3(view.position, "--camera-position");
        camera.target = to_vec3(view.target, "--camera-target");
        camera.up = to_vec3(view.up, "--camera-up");
        camera.fov_y_degrees = view.fov;
        camera.width = view.width;
        camera.height = view.height;
    } else {
        if (view.view < 0 || view.view > 1) throw InputError("bad option", "--view must be 0 or 1");
        const CameraPlacement placement = place_cameras(mesh, seed, view.width, view.height, view.fov);
        if (placement.default_up_used) warn("no up axis", "assuming +Y");
        camera = placement.cameras[view.view];
    }
    try {
        camera.validate();
    } catch (const std::invalid_argument& e) {
        throw InputError("bad camera", e.what());
    }
    return camera;
}

PipelineOptions pipeline_options(const ViewOptions& view) {
    PipelineOptions options;
    options.crease_angle_degrees = view.crease_angle;
    return options;
}

Drawing load_drawing(const std::string& path, const char* what, int width, int height) {
    if (!fs::exists(path)) throw InputError(std::string(what) + " not found", path);
    Drawing d = read_drawing_png(path);
    if (d.width() != width || d.height() != height)
        throw InputError("size mismatch", path + " is " + std::to_string(d.width()) + "x" +
                                              std::to_string(d.height()) + ", expected " + std::to_string(width) +
                                              "x" + std::to_string(height));
    return d;
}

std::optional<Drawing> load_external(const std::string& path, int width, int height) {
    if (path.empty()) return std::nullopt;
    return load_drawing(path, "external lines", width, height);
}

std::array<double, 4> ladder(const std::vector<std::string>& tokens, const char* name) {
    if (tokens.size() != 4) throw InputError("bad option", std::string(name) + " needs 4 values");
    return {parse_threshold(tokens[0]), parse_threshold(tokens[1]), parse_threshold(tokens[2]),
            parse_threshold(tokens[3])};
}

// PNG files under `root` keyed by relative path, sorted.
std::map<std::string, fs::path> png_files(const fs::path& root) {
    std::map<std::string, fs::path> files;
    if (!fs::is_directory(root)) throw InputError("directory not found", root.string());
    for (const auto& entry : fs::recursive_directory_iterator(root))
        if (entry.is_regular_file() && entry.path().extension() == ".png")
            files.emplace(fs::relative(entry.path(), root).generic_string(), entry.path());
    return files;
}

}  // namespace

double parse_threshold(const std::string& token) {
    if (token == "off" || token == "inf") return threshold_off;
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(token, &used);
    } catch (const std::exception&) {
        throw InputError("bad threshold", token);
    }
    if (used != token.size() || !(value >= 0.0)) throw InputError("bad threshold", token);
    return value;
}

json cmd_render(const RenderOptions& options, std::uint64_t seed) {
    if (options.thresholds.size() != 4) throw InputError("bad option", "--thresholds needs 4 values");
    const ThresholdSet t{parse_threshold(options.thresholds[0]), parse_threshold(options.thresholds[1]),
                         parse_threshold(options.thresholds[2]), parse_threshold(options.thresholds[3]),
                         options.boundaries};
    const TriangleMesh mesh = load_input_mesh(options.view);
    const Camera camera = resolve_camera(mesh, options.view, seed);
    const fs::path out = output_dir(options.out);
    const std::optional<Drawing> external = load_external(options.external, camera.width, camera.height);

    const MapStack maps = build_map_stack(mesh, camera, pipeline_options(options.view));
    if (maps.lines_empty()) warn("no lines", "every line map is empty at this view");
    const Drawing drawing = final_drawing(maps, t, t.include_boundaries, external);
    write_drawing_png(out / "drawing.png", drawing);
    write_json(out / "render.json", {{"thresholds", thresholds_json(t)}, {"camera", camera_json(camera)}});
    if (options.dump_maps) {
        dump_map_stack(out / "maps", maps);
        write_intensity_png(out / "maps" / "depth.png", maps.depth);
        for (std::size_t i = 0; i < maps.shaded.size(); ++i)
            write_intensity_png(out / "maps" / ("shaded_" + std::to_string(i + 1) + ".png"), maps.shaded[i]);
    }
    return {{"command", "render"}, {"drawing", (out / "drawing.png").string()}, {"thresholds", thresholds_json(t)}};
}

json cmd_optimize(const OptimizeOptions& options, std::uint64_t seed) {
    const TriangleMesh mesh = load_input_mesh(options.view);
    const Camera camera = resolve_camera(mesh, options.view, seed);
    const fs::path out = output_dir(options.out);
    const std::optional<Drawing> external = load_external(options.external, camera.width, camera.height);

    std::unique_ptr<Scorer> scorer;
    if (options.scorer == "reference") {
        if (options.reference.empty()) throw InputError("bad option", "--reference is required for the reference scorer");
        scorer = std::make_unique<ReferenceScorer>(
            load_drawing(options.reference, "reference drawing", camera.width, camera.height));
    } else if (options.scorer == "mini") {
        if (options.checkpoint.empty()) {
            warn("no checkpoint", "using a seeded untrained mini scorer");
            scorer = std::make_unique<MiniScorer>(MiniTopology{}, seed);
        } else {
            if (!fs::exists(options.checkpoint)) throw InputError("checkpoint not found", options.checkpoint);
            scorer = std::make_unique<MiniScorer>(load_checkpoint(options.checkpoint));
        }
    } else if (options.scorer == "constant") {
        scorer = std::make_unique<ConstantScorer>(options.constant);
    } else {
        throw InputError("bad option", "unknown scorer " + options.scorer);
    }

    OptimizeConfig config = options.fast ? OptimizeConfig::fast() : OptimizeConfig::full();
    if (!options.grid.empty()) {
        for (double v : options.grid)
            if (!(v >= 0.0) || std::isinf(v)) throw InputError("bad option", "--grid values must be finite and >= 0");
        config.starts = threshold_grid(options.grid);
    }
    if (options.max_iterations < 0) throw InputError("bad option", "--max-iterations must be >= 0");
    config.lbfgs.max_iterations = options.max_iterations;

    const MapStack maps = build_map_stack(mesh, camera, pipeline_options(options.view));
    const OptimizeResult result = select_thresholds(maps, *scorer, external, config);
    if (result.empty_maps) warn("no lines", "every line map is empty at this view");
    const Drawing drawing = final_drawing(maps, result.best, result.best.include_boundaries, external);
    write_drawing_png(out / "drawing.png", drawing);
    {
        std::ofstream trace(out / "trace.jsonl");
        if (!trace) throw std::runtime_error("cannot write trace");
        write_trace(trace, result);
    }
    const json summary = {{"thresholds", thresholds_json(result.best)},
                          {"score", result.best_score},
                          {"best_start", result.best_start},
                          {"starts", result.starts.size()},
                          {"flat_objective", result.flat_objective},
                          {"empty_maps", result.empty_maps},
                          {"scorer", scorer->name()},
                          {"profile", options.fast ? "fast" : "full"},
                          {"camera", camera_json(camera)}};
    write_json(out / "result.json", summary);
    json line = summary;
    line.erase("camera");
    line["command"] = "optimize";
    line["wall_seconds"] = result.wall_seconds;
    return line;
}

json cmd_eval(const EvalOptions& options) {
    if (options.synthetic.empty() || options.reference.empty())
        throw InputError("bad option", "--synthetic and --reference are required");
    if (options.out.empty()) throw InputError("bad option", "--out is required");
    if (!(options.threshold > 0.0 && options.threshold < 1.0)) throw InputError("bad option", "--threshold must be in (0,1)");
    if (options.near_radius_px < 0.0) throw InputError("bad option", "--near-radius-px must be positive");

    const auto synthetic = png_files(options.synthetic);
    const auto reference = png_files(options.reference);
    std::optional<std::map<std::string, fs::path>> contours;
    if (!options.contours.empty()) contours = png_files(options.contours);
    const std::string method =
        options.method.empty() ? fs::path(options.synthetic).lexically_normal().filename().string() : options.method;

    std::vector<EvalRow> rows;
    for (const auto& [key, path] : synthetic) {
        const auto match = reference.find(key);
        if (match == reference.end()) {
            warn("unpaired file", path.string());
            continue;
        }
        const Drawing s = read_drawing_png(path), h = read_drawing_png(match->second);
        if (s.width() != h.width() || s.height() != h.height()) {
            warn("size mismatch", key);
            continue;
        }
        BinaryDrawing bs = binarize(s, options.threshold), bh = binarize(h, options.threshold);
        const double radius = options.near_radius_px > 0.0 ? options.near_radius_px : default_near_radius(s.height());
        if (contours) {
            const auto mask = contours->find(key);
            if (mask == contours->end()) {
                warn("no contour mask", key);
            } else {
                const Mask m = read_mask_png(mask->second);
                bs = remove_silhouettes(bs, m, radius);
                bh = remove_silhouettes(bh, m, radius);
            }
        }
        const fs::path rel(key);
        const std::string shape = rel.has_parent_path() ? rel.begin()->string() : rel.stem().string();
        const std::string view = rel.has_parent_path() ? rel.stem().string() : "0";
        rows.push_back({shape, view, method, evaluate(bs, bh, radius)});
    }
    for (const auto& [key, path] : reference)
        if (!synthetic.contains(key)) warn("unpaired file", path.string());
    if (rows.empty()) warn("no pairs", "no paired drawings found");

    std::vector<EvalRow> all = rows;
    if (!rows.empty()) all.push_back({"mean", "all", method, mean_report(rows)});
    if (fs::path(options.out).has_parent_path()) fs::create_directories(fs::path(options.out).parent_path());
    std::ofstream out(options.out);
    if (!out) throw std::runtime_error("cannot write " + options.out);
    write_eval_csv(out, all);
    json summary = {{"command", "eval"}, {"pairs", rows.size()}, {"csv", options.out}};
    if (!rows.empty()) {
        const EvalReport m = all.back().report;
        summary["mean"] = {{"IoU", 100 * m.iou}, {"CD", m.chamfer}, {"F1", 100 * m.f1}, {"P", 100 * m.precision},
                           {"R", 100 * m.recall}};
    }
    return summary;
}

json cmd_gen_candidates(const GenCandidatesOptions& options, std::uint64_t seed) {
    if (options.k < 1 || options.k > candidate_count) throw InputError("bad option", "--k must be in [1, 264]");
    CandidateLadder ladder;
    ladder.suggestive = cli::ladder(options.ladder_suggestive, "--ladder-suggestive");
    ladder.apparent = cli::ladder(options.ladder_apparent, "--ladder-apparent");
    ladder.ridge_valley = cli::ladder(options.ladder_ridge_valley, "--ladder-ridge-valley");
    EdgeSettings edges;
    if (options.edge_high.size() != 4) throw InputError("bad option", "--edge-high needs 4 values");
    std::copy(options.edge_high.begin(), options.edge_high.end(), edges.high.begin());
    edges.low_ratio = options.edge_low_ratio;
    edges.sigma = options.edge_sigma;
    if (!(edges.low_ratio > 0.0 && edges.low_ratio <= 1.0)) throw InputError("bad option", "--edge-low-ratio must be in (0,1]");
    if (!(edges.sigma > 0.0)) throw InputError("bad option", "--edge-sigma must be positive");

    const TriangleMesh mesh = load_input_mesh(options.view);
    const fs::path out = output_dir(options.out);
    const std::string shape = options.shape.empty() ? fs::path(options.view.mesh).stem().string() : options.shape;
    const CameraPlacement placement = place_cameras(mesh, seed, options.view.width, options.view.height, options.view.fov);
    if (placement.default_up_used) warn("no up axis", "assuming +Y");

    json views = json::array();
    for (int v = 0; v < 2; ++v) {
        const Camera& camera = placement.cameras[v];
        const MapStack maps = build_map_stack(mesh, camera, pipeline_options(options.view));
        const CandidateSet set = generate_candidates(maps, ladder, edges);
        Selection selection;
        try {
            selection = select_distinct(set.drawings, static_cast<std::size_t>(options.k));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(std::string("candidate selection failed: ") + e.what());
        }
        if (!selection.dropped_empty.empty())
            warn("empty candidates", std::to_string(selection.dropped_empty.size()) + " dropped before selection");
        const std::string view = "view" + std::to_string(v);
        write_candidate_set(out, shape, view, set, selection, camera, ladder, edges, seed);
        views.push_back({{"view", view}, {"candidates", set.drawings.size()}, {"selected", selection.selected}});
    }
    return {{"command", "gen-candidates"}, {"shape", shape}, {"views", views}};
}

json cmd_train_ranker(const TrainOptionsCli& options, std::uint64_t seed) {
    if (options.pairs < 1 || options.held_out < 0 || options.size < 8)
        throw InputError("bad option", "--pairs >= 1, --held-out >= 0 and --size >= 8 are required");
    if (options.epochs < 0 || options.batch < 1 || !(options.learning_rate > 0.0))
        throw InputError("bad option", "--epochs >= 0, --batch >= 1 and --lr > 0 are required");
    const fs::path out = output_dir(options.out);

    MiniScorer init(MiniTopology{}, seed);
    if (!options.init.empty()) {
        if (!fs::exists(options.init)) throw InputError("checkpoint not found", options.init);
        init = load_checkpoint(options.init);
    }
    const std::vector<PreferencePair> all = synthetic_preference_pairs(options.pairs + options.held_out, seed, options.size);
    const std::span<const PreferencePair> train(all.data(), static_cast<std::size_t>(options.pairs));
    const std::span<const PreferencePair> held(all.data() + options.pairs, static_cast<std::size_t>(options.held_out));

    TrainOptions train_options;
    train_options.epochs = options.epochs;
    train_options.learning_rate = options.learning_rate;
    train_options.batch_size = options.batch;
    train_options.shuffle = options.shuffle;
    train_options.seed = seed;
    const auto start = std::chrono::steady_clock::now();
    const TrainResult result = train_mini_scorer(init, train, train_options);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    save_checkpoint(out / "checkpoint.ldm", result.scorer);
    {
        std::ofstream trace(out / "loss.jsonl");
        if (!trace) throw std::runtime_error("cannot write loss trace");
        for (std::size_t e = 0; e < result.epoch_loss.size(); ++e)
            trace << json{{"epoch", e}, {"loss", result.epoch_loss[e]}}.dump() << '\n';
    }
    const double held_accuracy = held.empty() ? 0.0 : pairwise_accuracy(result.scorer, held);
    const json summary = {{"initial_loss", result.initial_loss},
                          {"final_loss", result.final_loss},
                          {"epochs", options.epochs},
                          {"train_pairs", options.pairs},
                          {"held_out_pairs", options.held_out},
                          {"held_out_accuracy", held_accuracy},
                          {"seed", seed}};
    write_json(out / "summary.json", summary);
    json line = summary;
    line["command"] = "train-ranker";
    line["wall_seconds"] = seconds;
    return line;
}

}  // namespace linedraw::cli
