#ifndef SMALLPOLY_OPTIMIZER_HPP
#define SMALLPOLY_OPTIMIZER_HPP

#include "constructions.hpp"
#include "diamgraph.hpp"
#include "errors.hpp"
#include "geometry.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace smallpoly {

/// Reported once per accepted inner step; `after <= before` always holds.
struct StepInfo {
    int outer = 0;
    int inner = 0;
    double before = 0.0; ///< augmented objective (minimised form) before the step
    double after = 0.0;
};

struct SolveOptions {
    int max_iterations = 20000;     ///< cap on inner quasi-Newton steps per solve
    int max_outer = 60;
    double feasibility_tol = 1e-10;
    double stationarity_tol = 1e-9;
    double initial_penalty = 100.0;
    double penalty_growth = 10.0;
    double max_penalty = 1e9;
    std::uint64_t seed = 1;
    int restarts = 1;    ///< solver-driven descents per cycle length (first from the best candidate, then kicks)
    int candidates = 8;  ///< compositions per cycle length taken from the closure-defect ranking
    double enumeration_limit = 5e8; ///< rank exhaustively when C(n-1, c-1) is at most this
    int surrogate_starts = 2000;    ///< random descents when ranking is not exhaustive
    int jobs = 1;
    std::function<void(const StepInfo&)> on_step; ///< optional per-step observer
};

struct SolveResult {
    AngleConfig config;
    std::optional<ConvexPolygon> polygon; ///< rescaled to unit diameter; empty if realization failed
    double perimeter = 0.0;
    double closure_residual = 0.0;
    double max_distance_violation = 0.0;
    double stationarity = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string message;
};

struct ObjectiveValue {
    double value = 0.0;
    std::vector<double> gradient; ///< cycle angles first, then pendant angles
};

namespace detail {

inline Point2 unit_derivative(double a) { return {-std::sin(a), std::cos(a)}; }

/// Chain rule from per-vertex position gradients to angle gradients.
/// Cycle vertex m sits at the sum of unit(theta_j) for j < m; a pendant adds
/// its own unit vector to its owner's position.
inline void positions_to_angles(const AngleConfig& cfg, const std::vector<std::size_t>& owner,
                                const std::vector<Point2>& grad_pos, std::vector<double>& grad) {
    const std::size_t c = cfg.cycle_angles.size();
    std::vector<Point2> subtree(grad_pos.begin(), grad_pos.begin() + static_cast<std::ptrdiff_t>(c));
    for (std::size_t k = 0; k < owner.size(); ++k) subtree[owner[k]] = subtree[owner[k]] + grad_pos[c + k];
    grad.assign(cfg.size(), 0.0);
    Point2 suffix;
    for (std::size_t j = c; j-- > 0;) {
        // theta_j moves cycle vertices j+1 .. c-1 and their pendants.
        grad[j] = dot(unit_derivative(cfg.cycle_angles[j]), suffix);
        suffix = suffix + subtree[j];
    }
    grad[c - 1] = 0.0;
    for (std::size_t k = 0; k < owner.size(); ++k)
        grad[c + k] = dot(unit_derivative(cfg.pendant_angles[k]), grad_pos[c + k]);
}

/// Perimeter over a fixed vertex order and its gradient with respect to positions.
inline double ordered_perimeter(const std::vector<Point2>& pos, const std::vector<std::size_t>& order,
                                std::vector<Point2>* grad_pos, double weight) {
    const std::size_t n = order.size();
    NeumaierSum sum;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t a = order[i], b = order[(i + 1) % n];
        const Point2 d = pos[b] - pos[a];
        const double len = norm(d);
        sum.add(len);
        if (grad_pos) {
            const Point2 g = (weight / len) * d;
            (*grad_pos)[b] = (*grad_pos)[b] + g;
            (*grad_pos)[a] = (*grad_pos)[a] - g;
        }
    }
    return sum.value();
}

} // namespace detail

/// Perimeter of the realized polygon under a fixed polygon order
/// (polygon index -> graph vertex) and its exact gradient over every angle.
inline ObjectiveValue objective_and_gradient(const AngleConfig& cfg, const std::vector<std::size_t>& order) {
    const auto pos = vertex_positions(cfg);
    std::vector<Point2> grad_pos(pos.size());
    ObjectiveValue out;
    out.value = detail::ordered_perimeter(pos, order, &grad_pos, 1.0);
    detail::positions_to_angles(cfg, pendant_owners(cfg.topology), grad_pos, out.gradient);
    if (!std::isfinite(out.value) ||
        std::any_of(out.gradient.begin(), out.gradient.end(), [](double g) { return !std::isfinite(g); }))
        throw NumericError("non-finite perimeter or gradient");
    return out;
}

/// Component of a full angle gradient tangent to the closure manifold with
/// the rotation gauge removed. Zero at constrained stationary points.
inline std::vector<double> projected_gradient(const AngleConfig& cfg, std::vector<double> grad) {
    const std::size_t c = cfg.cycle_angles.size();
    grad[0] = 0.0;
    double a = 0, b = 0, d = 0, gx = 0, gy = 0;
    for (std::size_t j = 1; j < c; ++j) {
        const Point2 u = detail::unit_derivative(cfg.cycle_angles[j]);
        a += u.x * u.x;
        b += u.x * u.y;
        d += u.y * u.y;
        gx += u.x * grad[j];
        gy += u.y * grad[j];
    }
    const double det = a * d - b * b;
    if (det != 0.0) {
        const double wx = (d * gx - b * gy) / det;
        const double wy = (-b * gx + a * gy) / det;
        for (std::size_t j = 1; j < c; ++j) {
            const Point2 u = detail::unit_derivative(cfg.cycle_angles[j]);
            grad[j] -= u.x * wx + u.y * wy;
        }
    }
    return grad;
}

namespace detail {

/// Augmented Lagrangian for maximising the ordered perimeter, written as a
/// minimisation over every angle except the gauge-fixed cycle_angles[0].
class AugmentedLagrangian {
public:
    AugmentedLagrangian(AngleConfig base, std::vector<std::size_t> order)
        : base_(std::move(base)), order_(std::move(order)), owner_(pendant_owners(base_.topology)) {
        const std::size_t n = base_.size();
        std::vector<std::vector<bool>> is_edge(n, std::vector<bool>(n, false));
        for (auto [a, b] : graph_edges(base_.topology)) is_edge[a][b] = is_edge[b][a] = true;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                if (!is_edge[a][b]) pairs_.emplace_back(a, b);
        lambda_ineq_.assign(pairs_.size() + n, 0.0);
    }

    std::size_t dimension() const { return base_.size() - 1; }

    AngleConfig config(const std::vector<double>& x) const {
        AngleConfig cfg = base_;
        const std::size_t c = cfg.cycle_angles.size();
        for (std::size_t j = 1; j < c; ++j) cfg.cycle_angles[j] = x[j - 1];
        for (std::size_t k = 0; k < cfg.pendant_angles.size(); ++k) cfg.pendant_angles[k] = x[c - 1 + k];
        return cfg;
    }

    std::vector<double> variables(const AngleConfig& cfg) const {
        std::vector<double> x(cfg.cycle_angles.begin() + 1, cfg.cycle_angles.end());
        x.insert(x.end(), cfg.pendant_angles.begin(), cfg.pendant_angles.end());
        return x;
    }

    struct Constraints {
        Point2 closure;
        std::vector<double> ineq; ///< distance pairs, then convexity turns; feasible when >= 0
    };

    Constraints constraints(const AngleConfig& cfg) const {
        const auto pos = vertex_positions(cfg);
        Constraints out{closure_vector(cfg), {}};
        out.ineq.reserve(lambda_ineq_.size());
        for (auto [a, b] : pairs_) {
            const Point2 d = pos[a] - pos[b];
            out.ineq.push_back(1.0 - dot(d, d));
        }
        const std::size_t n = order_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 p0 = pos[order_[(i + n - 1) % n]], p1 = pos[order_[i]], p2 = pos[order_[(i + 1) % n]];
            out.ineq.push_back(turn_weight * cross(p1 - p0, p2 - p1));
        }
        return out;
    }

    /// F = -perimeter + equality and inequality AL terms. Fills grad (size dimension()).
    double evaluate(const std::vector<double>& x, std::vector<double>& grad) const {
        const AngleConfig cfg = config(x);
        const auto pos = vertex_positions(cfg);
        const std::size_t n = pos.size();
        std::vector<Point2> gpos(n);
        double f = -ordered_perimeter(pos, order_, &gpos, -1.0);

        std::size_t k = 0;
        for (auto [a, b] : pairs_) {
            const Point2 d = pos[a] - pos[b];
            const double g = 1.0 - dot(d, d);
            const double m = lambda_ineq_[k++] - mu_ * g;
            if (m > 0.0) {
                f += (m * m - lambda_ineq_[k - 1] * lambda_ineq_[k - 1]) / (2.0 * mu_);
                // dF/dg = -m, dg/dpa = -2d
                const Point2 gd = (2.0 * m) * d;
                gpos[a] = gpos[a] + gd;
                gpos[b] = gpos[b] - gd;
            } else {
                f -= lambda_ineq_[k - 1] * lambda_ineq_[k - 1] / (2.0 * mu_);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t i0 = order_[(i + n - 1) % n], i1 = order_[i], i2 = order_[(i + 1) % n];
            const Point2 e0 = pos[i1] - pos[i0], e1 = pos[i2] - pos[i1];
            const double g = turn_weight * cross(e0, e1);
            const double lam = lambda_ineq_[k++];
            const double m = lam - mu_ * g;
            if (m > 0.0) {
                f += (m * m - lam * lam) / (2.0 * mu_);
                // cross(e0, e1) = e0.x e1.y - e0.y e1.x
                const double s = -m * turn_weight;
                const Point2 de0{e1.y, -e1.x}; // d cross / d e0
                const Point2 de1{-e0.y, e0.x}; // d cross / d e1
                gpos[i0] = gpos[i0] - s * de0;
                gpos[i1] = gpos[i1] + s * de0 - s * de1;
                gpos[i2] = gpos[i2] + s * de1;
            } else {
                f -= lam * lam / (2.0 * mu_);
            }
        }

        std::vector<double> gang;
        detail::positions_to_angles(cfg, owner_, gpos, gang);

        const Point2 h = closure_vector(cfg);
        f += -lambda_eq_.x * h.x - lambda_eq_.y * h.y + 0.5 * mu_ * dot(h, h);
        const Point2 dh{mu_ * h.x - lambda_eq_.x, mu_ * h.y - lambda_eq_.y};
        const std::size_t c = cfg.cycle_angles.size();
        for (std::size_t j = 0; j < c; ++j) gang[j] += dot(dh, unit_derivative(cfg.cycle_angles[j]));

        grad.assign(dimension(), 0.0);
        for (std::size_t j = 1; j < gang.size(); ++j) grad[j - 1] = gang[j];
        return f;
    }

    /// Multiplier update; returns the worst constraint violation at x.
    double update_multipliers(const std::vector<double>& x) {
        const auto cons = constraints(config(x));
        lambda_eq_.x -= mu_ * cons.closure.x;
        lambda_eq_.y -= mu_ * cons.closure.y;
        for (std::size_t k = 0; k < cons.ineq.size(); ++k)
            lambda_ineq_[k] = std::max(0.0, lambda_ineq_[k] - mu_ * cons.ineq[k]);
        return violation(cons);
    }

    static double violation(const Constraints& cons) {
        double v = norm(cons.closure);
        for (double g : cons.ineq) v = std::max(v, -g);
        return v;
    }

    double penalty() const { return mu_; }
    void set_penalty(double mu) { mu_ = mu; }
    const std::vector<std::size_t>& order() const { return order_; }

    /// Scale of convexity constraints relative to distance constraints.
    static constexpr double turn_weight = 100.0;

private:
    AngleConfig base_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> owner_;
    std::vector<std::pair<std::size_t, std::size_t>> pairs_;
    Point2 lambda_eq_;
    std::vector<double> lambda_ineq_;
    double mu_ = 10.0;
};

/// Solves a x = b in place by Gaussian elimination with partial pivoting.
inline bool solve_dense(std::vector<double>& a, std::vector<double>& b, std::size_t n) {
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[piv * n + col])) piv = r;
        if (a[piv * n + col] == 0.0) return false;
        if (piv != col) {
            for (std::size_t k = 0; k < n; ++k) std::swap(a[col * n + k], a[piv * n + k]);
            std::swap(b[col], b[piv]);
        }
        for (std::size_t r = col + 1; r < n; ++r) {
            const double f = a[r * n + col] / a[col * n + col];
            if (f == 0.0) continue;
            for (std::size_t k = col; k < n; ++k) a[r * n + k] -= f * a[col * n + k];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t r = n; r-- > 0;) {
        double acc = b[r];
        for (std::size_t k = r + 1; k < n; ++k) acc -= a[r * n + k] * b[k];
        b[r] = acc / a[r * n + r];
    }
    return std::all_of(b.begin(), b.end(), [](double v) { return std::isfinite(v); });
}

/// Newton iterations on the KKT system of "maximise ordered perimeter
/// subject to closure" with cycle_angles[0] fixed. The Hessian of the
/// perimeter comes from central differences of the analytic gradient.
/// Valid only when no inequality constraint is active.
inline AngleConfig newton_polish(AngleConfig cfg, const std::vector<std::size_t>& order, int steps = 8) {
    const std::size_t c = cfg.cycle_angles.size();
    const std::size_t nv = cfg.size() - 1; // free variables
    const std::size_t dim = nv + 2;
    auto angle = [&](AngleConfig& a, std::size_t v) -> double& {
        // free variable v maps to full index v + 1
        const std::size_t i = v + 1;
        return i < c ? a.cycle_angles[i] : a.pendant_angles[i - c];
    };
    for (int step = 0; step < steps; ++step) {
        const auto base = objective_and_gradient(cfg, order);
        std::vector<double> hess(nv * nv);
        constexpr double fd = 1e-5;
        for (std::size_t v = 0; v < nv; ++v) {
            AngleConfig plus = cfg, minus = cfg;
            angle(plus, v) += fd;
            angle(minus, v) -= fd;
            const auto gp = objective_and_gradient(plus, order).gradient;
            const auto gm = objective_and_gradient(minus, order).gradient;
            for (std::size_t w = 0; w < nv; ++w) hess[w * nv + v] = -(gp[w + 1] - gm[w + 1]) / (2.0 * fd);
        }
        for (std::size_t v = 0; v < nv; ++v)
            for (std::size_t w = v + 1; w < nv; ++w)
                hess[v * nv + w] = hess[w * nv + v] = 0.5 * (hess[v * nv + w] + hess[w * nv + v]);

        // Multiplier estimate by least squares on the cycle block.
        std::vector<Point2> jac(nv);
        for (std::size_t j = 1; j < c; ++j) jac[j - 1] = unit_derivative(cfg.cycle_angles[j]);
        double a = 0, b = 0, d = 0, gx = 0, gy = 0;
        for (std::size_t v = 0; v < nv; ++v) {
            a += jac[v].x * jac[v].x;
            b += jac[v].x * jac[v].y;
            d += jac[v].y * jac[v].y;
            gx += jac[v].x * -base.gradient[v + 1];
            gy += jac[v].y * -base.gradient[v + 1];
        }
        const double det = a * d - b * b;
        if (det == 0.0) break;
        const Point2 lambda{(d * gx - b * gy) / det, (-b * gx + a * gy) / det};

        // W = hess(-P) - lambda . hess(h); hess(h) is diagonal: -unit(theta_j).
        std::vector<double> kkt(dim * dim, 0.0), rhs(dim, 0.0);
        for (std::size_t v = 0; v < nv; ++v)
            for (std::size_t w = 0; w < nv; ++w) kkt[v * dim + w] = hess[v * nv + w];
        for (std::size_t j = 1; j < c; ++j) kkt[(j - 1) * dim + (j - 1)] += dot(lambda, unit(cfg.cycle_angles[j]));
        for (std::size_t v = 0; v < nv; ++v) {
            kkt[v * dim + nv] = -jac[v].x;
            kkt[v * dim + nv + 1] = -jac[v].y;
            kkt[nv * dim + v] = jac[v].x;
            kkt[(nv + 1) * dim + v] = jac[v].y;
            rhs[v] = base.gradient[v + 1];
        }
        const Point2 h = closure_vector(cfg);
        rhs[nv] = -h.x;
        rhs[nv + 1] = -h.y;
        if (!solve_dense(kkt, rhs, dim)) break;
        double move = 0.0;
        for (std::size_t v = 0; v < nv; ++v) {
            angle(cfg, v) += rhs[v];
            move = std::max(move, std::abs(rhs[v]));
        }
        if (move < 1e-15) break;
    }
    return cfg;
}

struct InnerResult {
    double value = 0.0;
    double grad_inf = 0.0;
    int iterations = 0;
};

inline double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double a : v) m = std::max(m, std::abs(a));
    return m;
}

/// Dense BFGS with Armijo backtracking; only non-increasing steps are taken.
inline InnerResult minimize_bfgs(const AugmentedLagrangian& al, std::vector<double>& x, double gtol, int max_iter,
                                 int outer, const std::function<void(const StepInfo&)>& on_step) {
    const std::size_t m = x.size();
    std::vector<double> g, g_new, x_new(m), dir(m), s(m), y(m), hy(m);
    std::vector<double> hinv(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) hinv[i * m + i] = 1.0;
    bool scaled = false;
    int stalled = 0;

    double f = al.evaluate(x, g);
    InnerResult res{f, inf_norm(g), 0};
    constexpr double max_step = 0.05; // radians, keeps the frozen order meaningful
    while (res.iterations < max_iter && res.grad_inf > gtol) {
        double slope = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double acc = 0.0;
            for (std::size_t j = 0; j < m; ++j) acc -= hinv[i * m + j] * g[j];
            dir[i] = acc;
            slope += acc * g[i];
        }
        if (!(slope < 0.0)) {
            // Lost descent: fall back to steepest descent.
            std::fill(hinv.begin(), hinv.end(), 0.0);
            for (std::size_t i = 0; i < m; ++i) hinv[i * m + i] = 1.0;
            scaled = false;
            for (std::size_t i = 0; i < m; ++i) dir[i] = -g[i];
            slope = -std::inner_product(g.begin(), g.end(), g.begin(), 0.0);
        }
        double alpha = std::min(1.0, max_step / std::max(inf_norm(dir), 1e-300));
        double f_new = 0.0;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            for (std::size_t i = 0; i < m; ++i) x_new[i] = x[i] + alpha * dir[i];
            f_new = al.evaluate(x_new, g_new);
            if (std::isfinite(f_new) && f_new <= f + 1e-4 * alpha * slope) {
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if (!accepted) break; // no decrease resolvable in double precision
        if (on_step) on_step({outer, res.iterations, f, f_new});
        // Progress at roundoff level for a while means the iterate is as
        // good as double precision allows.
        stalled = f - f_new <= 1e-15 * std::max(1.0, std::abs(f)) ? stalled + 1 : 0;
        for (std::size_t i = 0; i < m; ++i) {
            s[i] = x_new[i] - x[i];
            y[i] = g_new[i] - g[i];
        }
        const double sy = std::inner_product(s.begin(), s.end(), y.begin(), 0.0);
        if (sy > 1e-16 * std::sqrt(std::inner_product(s.begin(), s.end(), s.begin(), 0.0) *
                                    std::inner_product(y.begin(), y.end(), y.begin(), 0.0))) {
            if (!scaled) {
                const double yy = std::inner_product(y.begin(), y.end(), y.begin(), 0.0);
                for (std::size_t i = 0; i < m; ++i) hinv[i * m + i] = sy / yy;
                scaled = true;
            }
            double yhy = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < m; ++j) acc += hinv[i * m + j] * y[j];
                hy[i] = acc;
                yhy += y[i] * acc;
            }
            const double rho = 1.0 / sy;
            const double coef = (1.0 + rho * yhy) * rho;
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j)
                    hinv[i * m + j] += coef * s[i] * s[j] - rho * (hy[i] * s[j] + s[i] * hy[j]);
        }
        x.swap(x_new);
        g.swap(g_new);
        f = f_new;
        res.value = f;
        res.grad_inf = inf_norm(g);
        ++res.iterations;
        if (stalled >= 8) break;
    }
    return res;
}

} // namespace detail

/// Augmented-Lagrangian perimeter maximisation over one topology. The polygon
/// vertex order is frozen from the start configuration. Once the iterate is
/// close and no inequality binds, a Newton step on the closure-constrained
/// KKT system finishes the job.
inline SolveResult solve(const Topology& topology, const AngleConfig& start, const SolveOptions& opts = {}) {
    if (start.topology != topology)
        throw InfeasibilityError("start configuration has topology " + to_string(start.topology) +
                                 ", expected " + to_string(topology));
    const double start_residual = closure_residual(start);
    if (!(start_residual <= 1e-6))
        throw InfeasibilityError("start configuration violates closure by " + std::to_string(start_residual));

    const auto order = convex_order(vertex_positions(start));
    detail::AugmentedLagrangian al(start, order);
    al.set_penalty(opts.initial_penalty);
    std::vector<double> x = al.variables(start);

    SolveResult res;
    std::optional<AngleConfig> finished;
    double stationarity = std::numeric_limits<double>::infinity();

    auto try_polish = [&](const AngleConfig& cfg) -> bool {
        const auto cons = al.constraints(cfg);
        if (*std::min_element(cons.ineq.begin(), cons.ineq.end()) <= 1e-6) return false;
        const auto polished = detail::newton_polish(cfg, order);
        const auto pc = al.constraints(polished);
        const double before = objective_and_gradient(cfg, order).value;
        const auto after = objective_and_gradient(polished, order);
        const double pst = detail::inf_norm(projected_gradient(polished, after.gradient));
        if (closure_residual(polished) > 0.1 * opts.feasibility_tol ||
            *std::min_element(pc.ineq.begin(), pc.ineq.end()) <= 0.0 || after.value < before - 1e-12 ||
            pst > opts.stationarity_tol)
            return false;
        finished = polished;
        stationarity = pst;
        return true;
    };

    double prev_violation = std::numeric_limits<double>::infinity();
    double gtol = 1e-3;
    for (int outer = 0; outer < opts.max_outer && res.iterations < opts.max_iterations; ++outer) {
        const auto inner =
            detail::minimize_bfgs(al, x, gtol, opts.max_iterations - res.iterations, outer, opts.on_step);
        res.iterations += inner.iterations;
        stationarity = inner.grad_inf;
        const double viol = al.update_multipliers(x);
        if (viol <= 1e-4 && stationarity <= 1e-3 && try_polish(restore_closure(al.config(x)))) break;
        if (viol <= opts.feasibility_tol && stationarity <= opts.stationarity_tol) break;
        if (viol > 0.25 * prev_violation)
            al.set_penalty(std::min(al.penalty() * opts.penalty_growth, opts.max_penalty));
        prev_violation = viol;
        gtol = std::max(opts.stationarity_tol, gtol * 0.1);
    }
    if (!finished) {
        const auto cfg = restore_closure(al.config(x));
        if (!try_polish(cfg)) finished = cfg;
    }

    res.config = *finished;
    res.stationarity = stationarity;
    res.closure_residual = closure_residual(res.config);
    const auto pos = vertex_positions(res.config);
    std::vector<Point2> verts(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) verts[i] = pos[order[i]];
    double max_dist = 0.0;
    for (std::size_t a = 0; a < verts.size(); ++a)
        for (std::size_t b = a + 1; b < verts.size(); ++b) max_dist = std::max(max_dist, distance(verts[a], verts[b]));
    res.max_distance_violation = std::max(0.0, max_dist - 1.0);

    try {
        ConvexPolygon poly(std::move(verts));
        poly = scaled(poly, 1.0 / diameter(poly).length);
        res.perimeter = perimeter(poly);
        res.polygon = std::move(poly);
    } catch (const ValidationError& e) {
        res.message = std::string("optimized vertices are not convex: ") + e.what();
        return res;
    }
    // Once the step search stalls at roundoff the last digits of stationarity
    // are out of reach; below this floor the perimeter no longer moves.
    constexpr double stall_floor = 1e-6;
    res.converged = res.closure_residual <= opts.feasibility_tol &&
                    res.max_distance_violation <= opts.feasibility_tol &&
                    stationarity <= std::max(opts.stationarity_tol, stall_floor);
    if (!res.converged) {
        std::ostringstream os;
        os << "not converged: closure residual " << res.closure_residual << ", distance violation "
           << res.max_distance_violation << ", stationarity " << stationarity;
        res.message = os.str();
    }
    return res;
}

struct SearchReport {
    Topology best_topology; ///< canonical
    SolveResult best;
    std::map<Topology, SolveResult> per_topology; ///< keyed by canonical topology
    std::map<Topology, double> seconds;          ///< wall clock per topology solve
};

namespace detail {

/// Solves `topology` from its star start and checks that the optimized
/// polygon still has the requested diameter graph.
inline SolveResult solve_from_star(const Topology& topology, const SolveOptions& opts) {
    SolveResult res;
    try {
        res = solve(topology, star_init(topology), opts);
    } catch (const Error& e) {
        res.converged = false;
        res.message = e.what();
        return res;
    }
    if (res.converged && res.polygon) {
        try {
            if (topology_of(extract(*res.polygon)) != canonical(topology)) {
                res.converged = false;
                res.message = "optimized polygon has a different diameter graph";
            }
        } catch (const StructureError& e) {
            res.converged = false;
            res.message = std::string("optimized polygon lost its diameter structure: ") + e.what();
        }
    }
    return res;
}

inline double score(const SolveResult& r) {
    return r.converged ? r.perimeter : -std::numeric_limits<double>::infinity();
}

/// Runs fn(i) for i in [0, count) on up to `jobs` threads; results are
/// written by index so the outcome never depends on scheduling.
template <class Fn>
void parallel_for(std::size_t count, int jobs, Fn&& fn) {
    const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(jobs, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) fn(i);
        });
}

class CompositionSearch {
public:
    CompositionSearch(int n, int c, const SolveOptions& opts, SearchReport& report)
        : n_(n), c_(c), opts_(opts), report_(report) {}

    /// Best-improvement descent over single-pendant moves.
    std::vector<int> climb(std::vector<int> comp) {
        comp = canonical_composition(comp);
        evaluate({comp});
        double cur = value(comp);
        for (;;) {
            std::vector<std::vector<int>> nbrs;
            std::set<std::vector<int>> seen;
            for (int i = 0; i < c_; ++i) {
                if (comp[i] == 0) continue;
                for (int j = 0; j < c_; ++j) {
                    if (j == i) continue;
                    auto t = comp;
                    --t[i];
                    ++t[j];
                    t = canonical_composition(t);
                    if (seen.insert(t).second) nbrs.push_back(std::move(t));
                }
            }
            evaluate(nbrs);
            const std::vector<int>* best = nullptr;
            double best_val = cur;
            for (const auto& t : nbrs) {
                const double v = value(t);
                if (v > best_val + 1e-13 || (best && v == best_val && t < *best)) {
                    best = &t;
                    best_val = v;
                }
            }
            if (!best) return comp;
            comp = *best;
            cur = best_val;
        }
    }

    /// Random single-pendant moves used to kick the descent elsewhere.
    std::vector<int> kick(std::vector<int> comp, std::mt19937_64& rng, int moves) const {
        std::uniform_int_distribution<int> pick(0, c_ - 1);
        for (int m = 0; m < moves; ++m) {
            int i = pick(rng);
            for (int tries = 0; comp[i] == 0 && tries < 4 * c_; ++tries) i = pick(rng);
            if (comp[i] == 0) break;
            int j = pick(rng);
            while (j == i) j = pick(rng);
            --comp[i];
            ++comp[j];
        }
        return canonical_composition(comp);
    }

    double value(const std::vector<int>& comp) const { return score(report_.per_topology.at(topology(comp))); }

    Topology topology(const std::vector<int>& comp) const { return {n_, c_, comp}; }

    void evaluate(const std::vector<std::vector<int>>& comps) {
        std::vector<Topology> todo;
        for (const auto& comp : comps)
            if (!report_.per_topology.contains(topology(comp))) todo.push_back(topology(comp));
        std::vector<SolveResult> results(todo.size());
        std::vector<double> secs(todo.size());
        parallel_for(todo.size(), opts_.jobs, [&](std::size_t i) {
            const auto t0 = std::chrono::steady_clock::now();
            results[i] = solve_from_star(todo[i], opts_);
            secs[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        });
        for (std::size_t i = 0; i < todo.size(); ++i) {
            report_.seconds[todo[i]] = secs[i];
            report_.per_topology.emplace(todo[i], std::move(results[i]));
        }
    }

private:
    int n_;
    int c_;
    const SolveOptions& opts_;
    SearchReport& report_;
};

} // namespace detail

/// Distance from closing the cycle when every boundary chord subtends the
/// same angle pi/n: |sum_j (-1)^j exp(-i pi K_j / n)| with K_j the running
/// count of chords up to cycle vertex j. Zero exactly when the bound
/// 2n sin(pi/2n) is attained by this composition; small values predict long
/// perimeters.
inline double closure_defect(int n, const std::vector<int>& composition) {
    std::complex<double> sum = 0.0;
    int chords = 0;
    for (std::size_t j = 0; j < composition.size(); ++j) {
        chords += composition[j] + 1;
        const double sign = j % 2 ? -1.0 : 1.0;
        sum += sign * std::polar(1.0, -std::numbers::pi * chords / n);
    }
    return std::abs(sum);
}

namespace detail {

inline double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Keeps the `limit` canonical compositions with the smallest defect.
class DefectRanking {
public:
    explicit DefectRanking(std::size_t limit) : limit_(limit) {}

    void offer(double defect, const std::vector<int>& comp) {
        if (heap_.size() >= limit_ && defect >= heap_.front().first) return;
        auto canon = canonical_composition(comp);
        if (!members_.insert(canon).second) return;
        heap_.emplace_back(defect, std::move(canon));
        std::push_heap(heap_.begin(), heap_.end());
        if (heap_.size() > limit_) {
            std::pop_heap(heap_.begin(), heap_.end());
            members_.erase(heap_.back().second);
            heap_.pop_back();
        }
    }

    double worst() const {
        return heap_.size() < limit_ ? std::numeric_limits<double>::infinity() : heap_.front().first;
    }

    std::vector<std::vector<int>> sorted() const {
        auto v = heap_;
        std::sort(v.begin(), v.end());
        std::vector<std::vector<int>> out;
        for (auto& e : v) out.push_back(std::move(e.second));
        return out;
    }

private:
    std::size_t limit_;
    std::vector<std::pair<double, std::vector<int>>> heap_;
    std::set<std::vector<int>> members_;
};

/// Depth-first walk over every composition, tracking the partial signed sum.
inline void rank_exhaustive(int n, int c, DefectRanking& ranking) {
    std::vector<std::complex<double>> root(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) root[k] = std::polar(1.0, -std::numbers::pi * k / n);
    std::vector<int> cum(static_cast<std::size_t>(c));
    std::vector<int> comp(static_cast<std::size_t>(c));
    cum[c - 1] = n;
    const std::complex<double> last = (c - 1) % 2 ? -root[n] : root[n];
    auto rec = [&](auto&& self, int j, int prev, std::complex<double> sum) -> void {
        if (j == c - 1) {
            const double d = std::abs(sum + last);
            if (d < ranking.worst()) {
                int p = 0;
                for (int i = 0; i < c; ++i) {
                    comp[i] = cum[i] - p - 1;
                    p = cum[i];
                }
                ranking.offer(d, comp);
            }
            return;
        }
        const double sign = j % 2 ? -1.0 : 1.0;
        for (int k = prev + 1; k <= n - (c - 1 - j); ++k) {
            cum[j] = k;
            self(self, j + 1, k, sum + sign * root[k]);
        }
    };
    rec(rec, 0, 0, {0.0, 0.0});
}

/// Seeded random starts, each followed by best-improvement descent on the defect.
inline void rank_sampled(int n, int c, int starts, std::mt19937_64& rng, DefectRanking& ranking) {
    std::uniform_int_distribution<int> slot(0, c - 1);
    for (int s = 0; s < starts; ++s) {
        std::vector<int> comp(static_cast<std::size_t>(c), 0);
        for (int m = 0; m < n - c; ++m) ++comp[slot(rng)];
        double cur = closure_defect(n, comp);
        for (bool improved = true; improved;) {
            improved = false;
            std::vector<int> best;
            for (int i = 0; i < c; ++i) {
                if (comp[i] == 0) continue;
                for (int j = 0; j < c; ++j) {
                    if (j == i) continue;
                    --comp[i];
                    ++comp[j];
                    const double d = closure_defect(n, comp);
                    if (d < cur - 1e-15) {
                        cur = d;
                        best = comp;
                    }
                    ++comp[i];
                    --comp[j];
                }
            }
            if (!best.empty()) {
                comp = std::move(best);
                improved = true;
            }
        }
        ranking.offer(cur, comp);
    }
}

} // namespace detail

/// Compositions of n - c pendants over c cycle vertices with the smallest
/// closure defect, canonical and best first.
inline std::vector<std::vector<int>> rank_compositions(int n, int c, const SolveOptions& opts, std::mt19937_64& rng) {
    detail::DefectRanking ranking(static_cast<std::size_t>(std::max(opts.candidates, 0)));
    if (opts.candidates <= 0) return {};
    if (detail::binomial(n - 1, c - 1) <= opts.enumeration_limit)
        detail::rank_exhaustive(n, c, ranking);
    else
        detail::rank_sampled(n, c, opts.surrogate_starts, rng, ranking);
    return ranking.sorted();
}

/// Heuristic search over diameter-graph topologies of small n-gons. For every
/// odd cycle length (all of them when `cycles` is empty) it solves the
/// balanced composition and the best-ranked compositions by closure defect,
/// then runs solver-driven descents over single-pendant moves: the first from
/// the best composition so far, the rest from seeded random kicks of it.
inline SearchReport search(int n, const SolveOptions& opts = {}, std::vector<int> cycles = {}) {
    if (n < 4) throw DomainError("search needs n >= 4, got " + std::to_string(n));
    if (opts.restarts < 1) throw DomainError("restarts must be at least 1");
    if (cycles.empty())
        for (int c = 3; c <= n; c += 2) cycles.push_back(c);
    SearchReport report;
    for (int c : cycles) {
        if (c < 3 || c % 2 == 0 || c > n) throw DomainError("invalid cycle length " + std::to_string(c));
        detail::CompositionSearch cs(n, c, opts, report);
        std::mt19937_64 rng(opts.seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(n) * 1000003ULL +
                            static_cast<std::uint64_t>(c));
        auto pool = rank_compositions(n, c, opts, rng);
        pool.insert(pool.begin(), canonical_composition(balanced_topology(n, c).composition));
        cs.evaluate(pool);
        auto best = pool.front();
        for (const auto& comp : pool)
            if (cs.value(comp) > cs.value(best)) best = comp;
        best = cs.climb(best);
        for (int r = 1; r < opts.restarts; ++r) {
            const auto local = cs.climb(cs.kick(best, rng, 2 + (r - 1) % 3));
            if (cs.value(local) > cs.value(best) + 1e-13) best = local;
        }
    }
    bool have = false;
    for (const auto& [t, r] : report.per_topology) {
        // map order is (c, composition), so strict > keeps the smallest key on ties
        if (r.converged && (!have || r.perimeter > report.best.perimeter)) {
            report.best = r;
            report.best_topology = t;
            have = true;
        }
    }
    return report;
}

} // namespace smallpoly

#endif // SMALLPOLY_OPTIMIZER_HPP
