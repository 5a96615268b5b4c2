#include <cstdint>
#include <iostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "linedraw/mesh.hpp"
#include "linedraw/parallel.hpp"

namespace {

using namespace linedraw::cli;
using json = nlohmann::json;

int fail(int code, const std::string& key, const std::string& detail) {
    std::cerr << json{{"error", key}, {"detail", detail}, {"exit_code", code}}.dump() << '\n';
    return code;
}

void add_view_options(CLI::App* cmd, ViewOptions& v) {
    cmd->add_option("--mesh", v.mesh, "Input OBJ mesh");
    cmd->add_option("--camera-position", v.position, "Explicit camera position (x y z)")->expected(3);
    cmd->add_option("--camera-target", v.target, "Explicit camera target (x y z)")->expected(3);
    cmd->add_option("--camera-up", v.up, "Explicit camera up vector (x y z)")->expected(3);
    cmd->add_option("--up-axis", v.up_axis, "Mesh ground up axis for automatic placement (x y z)")->expected(3);
    cmd->add_option("--view", v.view, "Which of the two automatic cameras to use (0 or 1)");
    cmd->add_option("--width", v.width, "Image width in pixels");
    cmd->add_option("--height", v.height, "Image height in pixels");
    cmd->add_option("--fov", v.fov, "Vertical field of view in degrees");
    cmd->add_option("--crease-angle", v.crease_angle, "Dihedral angle above which an edge is a crease");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Line drawings from triangle meshes"};
    app.name("linedraw");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.set_config("--config", "", "TOML config file; command-line flags take precedence");
    app.require_subcommand(1);

    int threads = 0;
    std::uint64_t seed = 0;
    app.add_option("--threads", threads, "Worker threads (0 = logical cores)")->check(CLI::NonNegativeNumber);
    app.add_option("--seed", seed, "Seed for every random choice");

    RenderOptions render;
    CLI::App* render_cmd = app.add_subcommand("render", "Draw with explicit thresholds");
    add_view_options(render_cmd, render.view);
    render_cmd->add_option("--thresholds", render.thresholds, "t_S t_R t_V t_A (number or off)")->expected(4);
    render_cmd->add_flag("--boundaries", render.boundaries, "Include mesh boundaries");
    render_cmd->add_option("--external", render.external, "External line image merged into the drawing");
    render_cmd->add_flag("--dump-maps", render.dump_maps, "Also write every map of the stack");
    render_cmd->add_option("--out", render.out, "Output directory");

    OptimizeOptions optimize;
    CLI::App* optimize_cmd = app.add_subcommand("optimize", "Choose thresholds by maximizing a scorer");
    add_view_options(optimize_cmd, optimize.view);
    optimize_cmd->add_option("--scorer", optimize.scorer, "reference | mini | constant")
        ->check(CLI::IsMember({"reference", "mini", "constant"}));
    optimize_cmd->add_option("--reference", optimize.reference, "Target drawing PNG for the reference scorer");
    optimize_cmd->add_option("--checkpoint", optimize.checkpoint, "Mini scorer checkpoint");
    optimize_cmd->add_option("--constant", optimize.constant, "Value of the constant scorer");
    optimize_cmd->add_flag("--fast", optimize.fast, "16 starts instead of 256");
    optimize_cmd->add_option("--grid", optimize.grid, "Per-threshold start values (replaces the profile grid)");
    optimize_cmd->add_option("--max-iterations", optimize.max_iterations, "L-BFGS iterations per start");
    optimize_cmd->add_option("--external", optimize.external, "External line image merged into the drawing");
    optimize_cmd->add_option("--out", optimize.out, "Output directory");

    EvalOptions eval;
    CLI::App* eval_cmd = app.add_subcommand("eval", "Compare synthetic drawings with reference drawings");
    eval_cmd->add_option("--synthetic", eval.synthetic, "Directory of synthetic drawings");
    eval_cmd->add_option("--reference", eval.reference, "Directory of reference drawings with matching names");
    eval_cmd->add_option("--contours", eval.contours, "Directory of contour masks; enables silhouette removal");
    eval_cmd->add_option("--method", eval.method, "Method column (default: synthetic directory name)");
    eval_cmd->add_option("--near-radius-px", eval.near_radius_px, "Nearness radius (default: 1% of image height)");
    eval_cmd->add_option("--threshold", eval.threshold, "Binarization threshold");
    eval_cmd->add_option("--out", eval.out, "Output CSV");

    GenCandidatesOptions gen;
    CLI::App* gen_cmd = app.add_subcommand("gen-candidates", "Render 264 candidates per view and pick the most distinct");
    add_view_options(gen_cmd, gen.view);
    gen_cmd->add_option("--shape", gen.shape, "Shape name (default: mesh file stem)");
    gen_cmd->add_option("--ladder-suggestive", gen.ladder_suggestive, "4 thresholds (number or off)")->expected(4);
    gen_cmd->add_option("--ladder-apparent", gen.ladder_apparent, "4 thresholds (number or off)")->expected(4);
    gen_cmd->add_option("--ladder-ridge-valley", gen.ladder_ridge_valley, "4 thresholds (number or off)")->expected(4);
    gen_cmd->add_option("--edge-high", gen.edge_high, "4 Canny high thresholds")->expected(4);
    gen_cmd->add_option("--edge-low-ratio", gen.edge_low_ratio, "Canny low/high ratio");
    gen_cmd->add_option("--edge-sigma", gen.edge_sigma, "Blur sigma of the first Canny family");
    gen_cmd->add_option("--k", gen.k, "Number of candidates to select");
    gen_cmd->add_option("--out", gen.out, "Output root directory");

    TrainOptionsCli train;
    CLI::App* train_cmd = app.add_subcommand("train-ranker", "Train the mini scorer on synthetic preference pairs");
    train_cmd->add_option("--pairs", train.pairs, "Training pairs");
    train_cmd->add_option("--held-out", train.held_out, "Held-out pairs");
    train_cmd->add_option("--size", train.size, "Sample size in pixels");
    train_cmd->add_option("--epochs", train.epochs, "Epochs");
    train_cmd->add_option("--lr", train.learning_rate, "Adam learning rate");
    train_cmd->add_option("--batch", train.batch, "Mini-batch size");
    train_cmd->add_flag("--shuffle", train.shuffle, "Seeded shuffle each epoch");
    train_cmd->add_option("--init", train.init, "Initial checkpoint (default: seeded initialization)");
    train_cmd->add_option("--out", train.out, "Output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ConfigError& e) {
        return fail(2, "bad config", e.what());
    } catch (const CLI::ParseError& e) {
        return fail(2, "bad arguments", e.what());
    }

    try {
        if (threads > 0) linedraw::set_thread_count(threads);
        json summary;
        if (render_cmd->parsed())
            summary = cmd_render(render, seed);
        else if (optimize_cmd->parsed())
            summary = cmd_optimize(optimize, seed);
        else if (eval_cmd->parsed())
            summary = cmd_eval(eval);
        else if (gen_cmd->parsed())
            summary = cmd_gen_candidates(gen, seed);
        else
            summary = cmd_train_ranker(train, seed);
        std::cout << summary.dump() << '\n';
        return 0;
    } catch (const InputError& e) {
        return fail(2, e.what(), e.detail());
    } catch (const std::invalid_argument& e) {
        return fail(2, "invalid input", e.what());
    } catch (const std::exception& e) {
        return fail(1, "computation failed", e.what());
    }
}
