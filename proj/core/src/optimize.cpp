#include "linedraw/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "linedraw/drawing_model.hpp"
#include "linedraw/parallel.hpp"

namespace linedraw {

std::vector<ThresholdVector> threshold_grid(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("empty threshold grid");
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());
    std::vector<ThresholdVector> grid;
    for (double a : sorted)
        for (double b : sorted)
            for (double c : sorted)
                for (double d : sorted) grid.push_back({a, b, c, d});
    return grid;
}

OptimizeConfig OptimizeConfig::full() { return OptimizeConfig{}; }

OptimizeConfig OptimizeConfig::fast() {
    OptimizeConfig c;
    c.starts = threshold_grid({0.0, 0.2});
    return c;
}

ScorerInput scorer_input(const MapStack& maps, const Drawing& drawing) { return {drawing, maps.depth, maps.shaded}; }

Drawing final_drawing(const MapStack& maps, const ThresholdSet& t, bool include_boundaries,
                      const std::optional<Drawing>& external) {
    ThresholdSet with = t;
    with.include_boundaries = include_boundaries;
    return merge_external(compose(maps, with), external);
}

double score_thresholds(const MapStack& maps, const Scorer& scorer, const std::optional<Drawing>& external,
                        const ThresholdSet& t) {
    const Drawing d = final_drawing(maps, t, t.include_boundaries, external);
    return scorer.score(scorer_input(maps, d));
}

namespace {

Eigen::VectorXd to_eigen(const ThresholdVector& t) { return Eigen::Vector4d(t[0], t[1], t[2], t[3]); }
ThresholdVector from_eigen(const Eigen::VectorXd& x) { return {x[0], x[1], x[2], x[3]}; }

void validate_start(const ThresholdVector& t) {
    for (double v : t)
        if (!(v >= 0.0) || !std::isfinite(v))
            throw std::invalid_argument("grid starts must be finite and non-negative");
}

StartTrace run_start(const DrawingModel& model, const MapStack& maps, const Scorer& scorer,
                     const ThresholdVector& initial, int index, const LbfgsOptions& options) {
    validate_start(initial);
    Drawing drawing;
    ScalarImage upstream;
    const Objective objective = [&](const Eigen::VectorXd& x, Eigen::VectorXd& grad) {
        const ThresholdVector t = from_eigen(x);
        model.render_into(t, drawing);
        const double p = scorer.score_and_grad(scorer_input(maps, drawing), upstream);
        const ThresholdVector dp = model.gradient(t, upstream);
        for (int k = 0; k < 4; ++k) grad[k] = -dp[k];
        return -p;
    };
    const LbfgsResult r = minimize_nonnegative(objective, to_eigen(initial), options);
    StartTrace trace;
    trace.index = index;
    trace.initial = initial;
    trace.final = from_eigen(r.x);
    trace.initial_score = -r.f_trace.front();
    trace.final_score = -r.f;
    trace.iterations = r.iterations;
    trace.evaluations = r.evaluations;
    trace.stop_reason = r.stop_reason;
    for (double v : r.f_trace) trace.score_trace.push_back(-v);
    return trace;
}

}  // namespace

OptimizeResult optimize_thresholds(const MapStack& maps, const Scorer& scorer,
                                   const std::optional<Drawing>& external, const OptimizeConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    maps.validate();
    if (config.starts.empty()) throw std::invalid_argument("empty threshold grid");
    OptimizeResult result;
    if (maps.lines_empty()) {
        result.empty_maps = true;
        result.best = ThresholdSet{};
        result.best_score = score_thresholds(maps, scorer, external, result.best);
        result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return result;
    }
    const DrawingModel model(maps, false, external);
    result.starts.resize(config.starts.size());
    parallel_for(config.starts.size(), [&](std::size_t i) {
        result.starts[i] = run_start(model, maps, scorer, config.starts[i], static_cast<int>(i), config.lbfgs);
    });
    int best = 0;
    for (std::size_t i = 1; i < result.starts.size(); ++i)
        if (result.starts[i].final_score > result.starts[best].final_score) best = static_cast<int>(i);
    result.best_start = best;
    result.best = ThresholdSet::from_values(result.starts[best].final, false);
    result.best_score = result.starts[best].final_score;
    result.flat_objective = std::all_of(result.starts.begin(), result.starts.end(),
                                        [](const StartTrace& s) { return s.stop_reason == "flat objective"; });
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

bool boundary_check(const MapStack& maps, const Scorer& scorer, const std::optional<Drawing>& external,
                    const ThresholdSet& t) {
    ThresholdSet with = t, without = t;
    with.include_boundaries = true;
    without.include_boundaries = false;
    return score_thresholds(maps, scorer, external, with) > score_thresholds(maps, scorer, external, without);
}

OptimizeResult select_thresholds(const MapStack& maps, const Scorer& scorer, const std::optional<Drawing>& external,
                                 const OptimizeConfig& config) {
    const auto t0 = std::chrono::steady_clock::now();
    OptimizeResult result = optimize_thresholds(maps, scorer, external, config);
    if (result.empty_maps) return result;
    if (!boundary_check(maps, scorer, external, result.best)) return result;
    result.best.include_boundaries = true;
    result.best_score = score_thresholds(maps, scorer, external, result.best);
    if (config.polish_with_boundaries) {
        const DrawingModel model(maps, true, external);
        StartTrace polish = run_start(model, maps, scorer, result.best.values(), -1, config.lbfgs);
        if (polish.final_score > result.best_score) {
            result.best = ThresholdSet::from_values(polish.final, true);
            result.best_score = polish.final_score;
        }
        result.polish = std::move(polish);
    }
    result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

ThresholdSet grid_search_baseline(const MapStack& maps, const std::function<double(const Drawing&)>& objective,
                                  const std::vector<ThresholdVector>& grid, bool include_boundaries) {
    if (grid.empty()) throw std::invalid_argument("empty threshold grid");
    maps.validate();
    std::vector<double> values(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        const ThresholdSet t = ThresholdSet::from_values(grid[i], include_boundaries);
        values[i] = objective(final_drawing(maps, t, include_boundaries, std::nullopt));
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (values[i] < values[best] || (values[i] == values[best] && grid[i] < grid[best])) best = i;
    }
    return ThresholdSet::from_values(grid[best], include_boundaries);
}

namespace {

nlohmann::json threshold_json(const ThresholdVector& t) {
    nlohmann::json j = nlohmann::json::array();
    for (double v : t) {
        if (std::isfinite(v))
            j.push_back(v);
        else
            j.push_back("inf");
    }
    return j;
}

nlohmann::json start_json(const StartTrace& s) {
    return {{"start", s.index},
            {"initial", threshold_json(s.initial)},
            {"final", threshold_json(s.final)},
            {"initial_score", s.initial_score},
            {"final_score", s.final_score},
            {"iterations", s.iterations},
            {"evaluations", s.evaluations},
            {"stop", s.stop_reason},
            {"score_trace", s.score_trace}};
}

}  // namespace

void write_trace(std::ostream& out, const OptimizeResult& result) {
    for (const StartTrace& s : result.starts) out << start_json(s).dump() << '\n';
    if (result.polish) {
        nlohmann::json j = start_json(*result.polish);
        j["polish"] = true;
        out << j.dump() << '\n';
    }
}

}  // namespace linedraw
