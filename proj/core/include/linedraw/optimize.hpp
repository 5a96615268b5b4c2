#pragma once

#include <array>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "linedraw/filter.hpp"
#include "linedraw/lbfgs.hpp"
#include "linedraw/map_stack.hpp"
#include "linedraw/ranker.hpp"

namespace linedraw {

using ThresholdVector = std::array<double, 4>;

/// Every combination of `values` over the four thresholds, in lexicographic
/// order of (t_S, t_R, t_V, t_A).
std::vector<ThresholdVector> threshold_grid(const std::vector<double>& values);

struct OptimizeConfig {
    std::vector<ThresholdVector> starts = threshold_grid({0.0, 0.05, 0.2, 0.5});
    LbfgsOptions lbfgs;
    /// Re-run L-BFGS from t_opt with boundaries included when the boundary
    /// check turns them on.
    bool polish_with_boundaries = true;

    /// 4^4 starts over {0, 0.05, 0.2, 0.5}.
    static OptimizeConfig full();
    /// 2^4 starts over {0, 0.2}.
    static OptimizeConfig fast();
};

struct StartTrace {
    int index = 0;
    ThresholdVector initial{};
    ThresholdVector final{};
    double initial_score = 0.0;
    double final_score = 0.0;
    int iterations = 0;
    int evaluations = 0;
    std::string stop_reason;
    /// Score after every accepted step (non-decreasing).
    std::vector<double> score_trace;
};

struct OptimizeResult {
    ThresholdSet best;
    double best_score = 0.0;
    int best_start = 0;
    std::vector<StartTrace> starts;
    double wall_seconds = 0.0;
    /// Every start saw a zero gradient at its initial point.
    bool flat_objective = false;
    /// All line maps are empty; the result is the zero vector.
    bool empty_maps = false;
    /// Set by select_thresholds when boundary polishing ran.
    std::optional<StartTrace> polish;
};

/// Scorer input view of a drawing rendered with the stack's depth and shading.
ScorerInput scorer_input(const MapStack& maps, const Drawing& drawing);

/// Score of the drawing at the given thresholds.
double score_thresholds(const MapStack& maps, const Scorer& scorer, const std::optional<Drawing>& external,
                        const ThresholdSet& t);

/// Multi-start projected L-BFGS maximization of the score over t >= 0 with
/// boundaries excluded. Starts run in parallel; ties keep the lowest index.
OptimizeResult optimize_thresholds(const MapStack& maps, const Scorer& scorer,
                                   const std::optional<Drawing>& external, const OptimizeConfig& config = {});

/// True iff including boundary lines at fixed t strictly raises the score.
bool boundary_check(const MapStack& maps, const Scorer& scorer, const std::optional<Drawing>& external,
                    const ThresholdSet& t);

/// max(I_G(t), I_L) with the chosen boundary setting.
Drawing final_drawing(const MapStack& maps, const ThresholdSet& t, bool include_boundaries,
                      const std::optional<Drawing>& external);

/// optimize_thresholds, then the boundary check, then (if boundaries are on
/// and polishing is enabled) one more L-BFGS run with boundaries included.
/// The returned best.include_boundaries holds the check's outcome.
OptimizeResult select_thresholds(const MapStack& maps, const Scorer& scorer, const std::optional<Drawing>& external,
                                 const OptimizeConfig& config = {});

/// Exhaustive argmin of objective(final drawing) over the grid; ties go to
/// the lexicographically smallest t.
ThresholdSet grid_search_baseline(const MapStack& maps, const std::function<double(const Drawing&)>& objective,
                                  const std::vector<ThresholdVector>& grid, bool include_boundaries = false);

/// One JSON object per start (plus the polish run, if any), one per line.
void write_trace(std::ostream& out, const OptimizeResult& result);

}  // namespace linedraw
