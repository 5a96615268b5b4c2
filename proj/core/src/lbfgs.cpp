#include "linedraw/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace linedraw {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

Eigen::VectorXd project(Eigen::VectorXd x) { return x.cwiseMax(0.0); }

Eigen::VectorXd projected_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& g) {
    Eigen::VectorXd pg = g;
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x[i] <= 0.0 && g[i] > 0.0) pg[i] = 0.0;
    return pg;
}

// Removes components that would leave the feasible set from a bound.
void clip_direction(const Eigen::VectorXd& x, Eigen::VectorXd& d) {
    for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x[i] <= 0.0 && d[i] < 0.0) d[i] = 0.0;
}

struct Pair {
    Eigen::VectorXd s, y;
    double rho;
};

Eigen::VectorXd two_loop(const Eigen::VectorXd& g, const std::deque<Pair>& mem) {
    Eigen::VectorXd q = g;
    std::vector<double> alpha(mem.size());
    for (std::size_t k = mem.size(); k-- > 0;) {
        alpha[k] = mem[k].rho * mem[k].s.dot(q);
        q -= alpha[k] * mem[k].y;
    }
    double gamma;
    if (mem.empty()) {
        const double n = g.norm();
        gamma = n > 0.0 ? 1.0 / n : 1.0;
    } else {
        const Pair& last = mem.back();
        gamma = last.s.dot(last.y) / last.y.squaredNorm();
    }
    Eigen::VectorXd r = gamma * q;
    for (std::size_t k = 0; k < mem.size(); ++k) {
        const double beta = mem[k].rho * mem[k].y.dot(r);
        r += (alpha[k] - beta) * mem[k].s;
    }
    return -r;
}

struct Sample {
    double alpha = 0.0;
    double phi = 0.0;
    double dphi = 0.0;
    Eigen::VectorXd x, g;
};

// Minimizer of the cubic through (a, fa, da) and (b, fb, db), safeguarded
// into the interior of [a, b].
double interpolate(const Sample& a, const Sample& b) {
    const double lo = std::min(a.alpha, b.alpha), hi = std::max(a.alpha, b.alpha);
    const double d1 = a.dphi + b.dphi - 3.0 * (a.phi - b.phi) / (a.alpha - b.alpha);
    const double disc = d1 * d1 - a.dphi * b.dphi;
    double t = 0.5 * (lo + hi);
    if (disc >= 0.0) {
        const double d2 = std::copysign(std::sqrt(disc), b.alpha - a.alpha);
        const double denom = b.dphi - a.dphi + 2.0 * d2;
        if (denom != 0.0) {
            const double c = b.alpha - (b.alpha - a.alpha) * (b.dphi + d2 - d1) / denom;
            if (std::isfinite(c)) t = c;
        }
    }
    const double margin = 0.1 * (hi - lo);
    if (!(t > lo + margin && t < hi - margin)) t = 0.5 * (lo + hi);
    return t;
}

}  // namespace

LbfgsResult minimize_nonnegative(const Objective& f, Eigen::VectorXd x0, const LbfgsOptions& options) {
    if (options.memory < 1 || options.max_iterations < 0 || options.max_line_search < 1)
        throw std::invalid_argument("invalid L-BFGS options");
    const Eigen::Index n = x0.size();
    LbfgsResult result;
    Eigen::VectorXd x = project(std::move(x0));
    Eigen::VectorXd g(n);
    double fx = f(x, g);
    ++result.evaluations;
    result.f_trace.push_back(fx);
    if (!std::isfinite(fx)) throw std::runtime_error("objective is not finite at the starting point");

    auto finish = [&](const char* reason) {
        result.x = x;
        result.f = fx;
        result.stop_reason = reason;
        return result;
    };

    if (g.isZero(0.0)) return finish("flat objective");

    std::deque<Pair> mem;
    for (int iter = 0; iter < options.max_iterations; ++iter) {
        const Eigen::VectorXd pg = projected_gradient(x, g);
        if (pg.lpNorm<Eigen::Infinity>() <= options.gradient_tolerance) return finish("converged");

        Eigen::VectorXd d = two_loop(g, mem);
        clip_direction(x, d);
        double slope = g.dot(d);
        if (!(slope < 0.0)) {
            mem.clear();
            d = -pg / pg.norm();
            clip_direction(x, d);
            slope = g.dot(d);
            if (!(slope < 0.0)) return finish("converged");
        }

        double alpha_max = inf;
        for (Eigen::Index i = 0; i < n; ++i)
            if (d[i] < 0.0) alpha_max = std::min(alpha_max, -x[i] / d[i]);

        auto evaluate = [&](double alpha) {
            Sample s;
            s.alpha = alpha;
            s.x = project(x + alpha * d);
            s.g.resize(n);
            s.phi = f(s.x, s.g);
            s.dphi = s.g.dot(d);
            ++result.evaluations;
            return s;
        };

        const Sample start{0.0, fx, slope, x, g};
        const double c1 = options.c1, c2 = options.c2;
        auto armijo = [&](const Sample& s) { return std::isfinite(s.phi) && s.phi <= fx + c1 * s.alpha * slope; };
        auto curvature = [&](const Sample& s) { return std::abs(s.dphi) <= -c2 * slope; };

        bool found = false;
        Sample accepted;
        auto zoom = [&](Sample lo, Sample hi, int budget) {
            for (int k = 0; k < budget; ++k) {
                if (std::abs(hi.alpha - lo.alpha) <= 1e-14 * std::max(1.0, lo.alpha)) break;
                Sample s = evaluate(interpolate(lo, hi));
                if (!armijo(s) || s.phi >= lo.phi) {
                    hi = std::move(s);
                } else {
                    if (curvature(s)) {
                        accepted = std::move(s);
                        return true;
                    }
                    if (s.dphi * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
                    lo = std::move(s);
                }
            }
            // Fall back to the best point with sufficient decrease, if any.
            if (lo.alpha > 0.0) {
                accepted = std::move(lo);
                return true;
            }
            return false;
        };

        double alpha = std::min(1.0, alpha_max);
        Sample prev = start;
        for (int k = 0; k < options.max_line_search; ++k) {
            Sample s = evaluate(alpha);
            if (!armijo(s) || (k > 0 && s.phi >= prev.phi)) {
                found = zoom(prev, s, options.max_line_search);
                break;
            }
            if (curvature(s)) {
                accepted = std::move(s);
                found = true;
                break;
            }
            if (s.dphi >= 0.0) {
                found = zoom(s, prev, options.max_line_search);
                break;
            }
            if (alpha >= alpha_max) {
                // Still descending at the bound: take the feasible endpoint.
                accepted = std::move(s);
                found = true;
                break;
            }
            prev = std::move(s);
            alpha = std::min(2.0 * alpha, alpha_max);
        }
        if (!found || !(accepted.phi <= fx)) return finish("line search failed");

        const Eigen::VectorXd s_vec = accepted.x - x;
        const Eigen::VectorXd y_vec = accepted.g - g;
        const double sy = s_vec.dot(y_vec);
        if (sy > 1e-12 * y_vec.squaredNorm() && sy > 0.0) {
            mem.push_back(Pair{s_vec, y_vec, 1.0 / sy});
            if (static_cast<int>(mem.size()) > options.memory) mem.pop_front();
        }
        x = std::move(accepted.x);
        g = std::move(accepted.g);
        fx = accepted.phi;
        result.f_trace.push_back(fx);
        ++result.iterations;
    }
    const Eigen::VectorXd pg = projected_gradient(x, g);
    if (pg.lpNorm<Eigen::Infinity>() <= options.gradient_tolerance) return finish("converged");
    return finish("max iterations");
}

}  // namespace linedraw
