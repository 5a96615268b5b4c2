#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace linedraw::cli {

/// Bad user input; maps to exit code 2. `what()` is the short error key.
class InputError : public std::runtime_error {
public:
    InputError(const std::string& key, std::string detail) : std::runtime_error(key), detail_(std::move(detail)) {}
    [[nodiscard]] const std::string& detail() const { return detail_; }

private:
    std::string detail_;
};

/// Mesh and camera selection shared by the geometry commands.
struct ViewOptions {
    std::string mesh;
    /// Explicit camera when non-empty; otherwise auto placement.
    std::vector<double> position;
    std::vector<double> target{0.0, 0.0, 0.0};
    std::vector<double> up{0.0, 1.0, 0.0};
    /// Ground up axis of the mesh for auto placement; +Y when empty.
    std::vector<double> up_axis;
    int view = 0;
    int width = 768;
    int height = 768;
    double fov = 50.0;
    double crease_angle = 60.0;
};

struct RenderOptions {
    ViewOptions view;
    std::vector<std::string> thresholds;  // t_S t_R t_V t_A, "off" allowed
    bool boundaries = false;
    std::string external;
    bool dump_maps = false;
    std::string out;
};

struct OptimizeOptions {
    ViewOptions view;
    std::string scorer = "reference";
    std::string reference;
    std::string checkpoint;
    double constant = 0.0;
    bool fast = false;
    std::vector<double> grid;
    int max_iterations = 50;
    std::string external;
    std::string out;
};

struct EvalOptions {
    std::string synthetic;
    std::string reference;
    std::string contours;
    std::string method;
    double near_radius_px = 0.0;  // 0 = 1% of the image height
    double threshold = 0.5;
    std::string out;
};

struct GenCandidatesOptions {
    ViewOptions view;
    std::string shape;
    std::vector<std::string> ladder_suggestive{"0.05", "0.2", "0.6", "off"};
    std::vector<std::string> ladder_apparent{"0.05", "0.2", "0.6", "off"};
    std::vector<std::string> ladder_ridge_valley{"0.05", "0.2", "0.6", "off"};
    std::vector<double> edge_high{0.05, 0.1, 0.2, 0.4};
    double edge_low_ratio = 0.4;
    double edge_sigma = 1.0;
    int k = 8;
    std::string out;
};

struct TrainOptionsCli {
    int pairs = 160;
    int held_out = 80;
    int size = 32;
    int epochs = 15;
    double learning_rate = 1e-3;
    int batch = 32;
    bool shuffle = false;
    std::string init;
    std::string out;
};

/// Each command returns a one-line JSON summary for stdout.
nlohmann::json cmd_render(const RenderOptions& options, std::uint64_t seed);
nlohmann::json cmd_optimize(const OptimizeOptions& options, std::uint64_t seed);
nlohmann::json cmd_eval(const EvalOptions& options);
nlohmann::json cmd_gen_candidates(const GenCandidatesOptions& options, std::uint64_t seed);
nlohmann::json cmd_train_ranker(const TrainOptionsCli& options, std::uint64_t seed);

/// Parses a threshold token: a non-negative number or "off".
double parse_threshold(const std::string& token);

}  // namespace linedraw::cli
