#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace linedraw {

struct LbfgsOptions {
    int memory = 10;
    int max_iterations = 50;
    /// Stop when the infinity norm of the projected gradient falls below this.
    double gradient_tolerance = 1e-6;
    double c1 = 1e-4;
    double c2 = 0.9;
    int max_line_search = 30;
};

/// f(x), writing the gradient into `grad` (already sized).
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

struct LbfgsResult {
    Eigen::VectorXd x;
    double f = 0.0;
    int iterations = 0;
    int evaluations = 0;
    /// "converged", "max iterations", "line search failed" or "flat objective".
    std::string stop_reason;
    /// Objective value at the start and after every accepted step.
    std::vector<double> f_trace;
};

/// Minimizes f subject to x >= 0. Directions come from the two-loop L-BFGS
/// recursion with components pushing into an active bound removed; the strong
/// Wolfe line search is confined to the feasible segment, and iterates are
/// projected onto the bound. Accepted steps never increase f.
LbfgsResult minimize_nonnegative(const Objective& f, Eigen::VectorXd x0, const LbfgsOptions& options = {});

}  // namespace linedraw
