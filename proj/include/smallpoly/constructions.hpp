#ifndef SMALLPOLY_CONSTRUCTIONS_HPP
#define SMALLPOLY_CONSTRUCTIONS_HPP

#include "diamgraph.hpp"
#include "errors.hpp"
#include "geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace smallpoly {

/// Perimeter bound 2n sin(pi / 2n) for small n-gons.
inline double upper_bound(int n) {
    if (n < 3) throw DomainError("upper_bound needs n >= 3, got " + std::to_string(n));
    return 2.0 * n * std::sin(std::numbers::pi / (2.0 * n));
}

/// Regular n-gon with unit diameter in canonical pose.
inline ConvexPolygon regular_small(int n) {
    if (n < 3) throw DomainError("regular_small needs n >= 3, got " + std::to_string(n));
    // Odd n: the longest diagonal skips (n-1)/2 edges. Even n: opposite vertices.
    const double radius = n % 2 ? 0.5 / std::cos(std::numbers::pi / (2.0 * n)) : 0.5;
    std::vector<Point2> v(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) v[k] = radius * unit(2.0 * std::numbers::pi * k / n);
    return canonicalize(ConvexPolygon(std::move(v)));
}

struct ReferenceRecord {
    int cycle = 0;
    double perimeter = 0.0;
    std::string source;
};

/// Published long-perimeter small 32-gons, in the order they are usually tabulated.
inline std::vector<ReferenceRecord> reference_records() {
    return {
        {3, 3.140323421103532, "Tamvakis 1987"},
        {17, 3.140331085836778, "Mossinghoff 2006 (B32*)"},
        {23, 3.140331154141625, "Bingane 2021 (D32*)"},
        {21, 3.140331156355381, "Xue 2021"},
        {21, 3.140331156954614, "current record"},
    };
}

/// One direction angle per unit diameter. Graph vertex j < c is cycle vertex
/// j; pendants follow, grouped by owning cycle vertex in cycle order.
struct AngleConfig {
    Topology topology; ///< composition in this config's cycle order
    std::vector<double> cycle_angles;
    std::vector<double> pendant_angles;

    std::size_t size() const { return cycle_angles.size() + pendant_angles.size(); }
};

/// Cycle position owning each pendant, in pendant order.
inline std::vector<std::size_t> pendant_owners(const Topology& t) {
    std::vector<std::size_t> owner;
    for (std::size_t j = 0; j < t.composition.size(); ++j)
        owner.insert(owner.end(), static_cast<std::size_t>(t.composition[j]), j);
    return owner;
}

/// Vector sum of the cycle's unit edges; zero for a closed cycle.
inline Point2 closure_vector(const AngleConfig& cfg) {
    NeumaierSum x, y;
    for (double a : cfg.cycle_angles) {
        x.add(std::cos(a));
        y.add(std::sin(a));
    }
    return {x.value(), y.value()};
}

inline double closure_residual(const AngleConfig& cfg) { return norm(closure_vector(cfg)); }

/// Graph-vertex positions from chained unit vectors; no feasibility checks.
inline std::vector<Point2> vertex_positions(const AngleConfig& cfg) {
    const std::size_t c = cfg.cycle_angles.size();
    std::vector<Point2> pos(cfg.size());
    for (std::size_t j = 0; j + 1 < c; ++j) pos[j + 1] = pos[j] + unit(cfg.cycle_angles[j]);
    const auto owner = pendant_owners(cfg.topology);
    for (std::size_t k = 0; k < owner.size(); ++k) pos[c + k] = pos[owner[k]] + unit(cfg.pendant_angles[k]);
    return pos;
}

/// Polygon index -> graph vertex, counterclockwise around the centroid,
/// starting at graph vertex 0.
inline std::vector<std::size_t> convex_order(const std::vector<Point2>& pos) {
    Point2 centroid;
    for (const auto& p : pos) centroid = centroid + p;
    centroid = (1.0 / static_cast<double>(pos.size())) * centroid;
    std::vector<double> angle(pos.size());
    for (std::size_t i = 0; i < pos.size(); ++i) {
        const Point2 d = pos[i] - centroid;
        angle[i] = std::atan2(d.y, d.x);
    }
    std::vector<std::size_t> order(pos.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return angle[a] < angle[b]; });
    std::rotate(order.begin(), std::find(order.begin(), order.end(), std::size_t{0}), order.end());
    return order;
}

/// Graph edges as graph-vertex pairs: cycle edges (j, j+1) first, then pendants.
inline std::vector<std::pair<std::size_t, std::size_t>> graph_edges(const Topology& t) {
    const auto c = static_cast<std::size_t>(t.c);
    std::vector<std::pair<std::size_t, std::size_t>> e;
    for (std::size_t j = 0; j < c; ++j) e.emplace_back(j, (j + 1) % c);
    const auto owner = pendant_owners(t);
    for (std::size_t k = 0; k < owner.size(); ++k) e.emplace_back(owner[k], c + k);
    return e;
}

struct Realization {
    ConvexPolygon polygon;
    std::vector<std::size_t> graph_vertex;                    ///< polygon index -> graph vertex
    std::vector<std::pair<std::size_t, std::size_t>> edges;   ///< graph edges in polygon indices
};

inline constexpr double tol_closure = 1e-9;

inline Realization realize(const AngleConfig& cfg) {
    const double residual = closure_residual(cfg);
    if (!(residual <= tol_closure))
        throw InfeasibilityError("cycle does not close: residual " + std::to_string(residual));
    const auto pos = vertex_positions(cfg);
    const auto order = convex_order(pos);
    std::vector<Point2> v(order.size());
    std::vector<std::size_t> index_of(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        v[i] = pos[order[i]];
        index_of[order[i]] = i;
    }
    if (!is_convex(v)) throw RealizationError("realized vertices are not in convex position");
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (auto [a, b] : graph_edges(cfg.topology)) edges.emplace_back(index_of[a], index_of[b]);
    try {
        return {ConvexPolygon(std::move(v)), order, std::move(edges)};
    } catch (const ValidationError& e) {
        throw RealizationError(std::string("realized polygon is invalid: ") + e.what());
    }
}

/// Reinhardt-star start: cycle edge j points at j*pi*(c-1)/c, and the pendants
/// of each cycle vertex fan out evenly inside the arc between its two cycle
/// neighbours, half a step away from either end.
inline AngleConfig star_init(const Topology& t) {
    if (const auto why = topology_problem(t); !why.empty())
        throw ConstructionError("cannot initialise " + to_string(t) + ": " + why);
    const int c = t.c;
    AngleConfig cfg;
    cfg.topology = t;
    cfg.cycle_angles.resize(static_cast<std::size_t>(c));
    const double step = std::numbers::pi * (c - 1) / c;
    for (int j = 0; j < c; ++j) cfg.cycle_angles[j] = std::remainder(j * step, 2.0 * std::numbers::pi);
    for (int j = 0; j < c; ++j) {
        const int k = t.composition[j];
        const double to_next = cfg.cycle_angles[j];
        const double to_prev = cfg.cycle_angles[(j + c - 1) % c] + std::numbers::pi;
        double gap = std::remainder(to_prev - to_next, 2.0 * std::numbers::pi);
        if (gap <= 0.0) gap += 2.0 * std::numbers::pi;
        for (int m = 0; m < k; ++m) cfg.pendant_angles.push_back(to_next + (m + 0.5) * gap / k);
    }
    try {
        (void)realize(cfg);
    } catch (const Error& e) {
        throw ConstructionError("star start for " + to_string(t) + " is not realizable: " + e.what());
    }
    return cfg;
}

/// Reads the angle parameterisation off a polygon and its diameter graph.
/// Cycle vertex 0 is the graph's first cycle vertex.
inline AngleConfig measure_config(const ConvexPolygon& p, const DiameterGraph& g) {
    AngleConfig cfg;
    cfg.topology = topology_in_cycle_order(g);
    const std::size_t c = g.cycle.size();
    auto direction = [&](std::size_t a, std::size_t b) {
        const Point2 d = p[b] - p[a];
        return std::atan2(d.y, d.x);
    };
    for (std::size_t j = 0; j < c; ++j) cfg.cycle_angles.push_back(direction(g.cycle[j], g.cycle[(j + 1) % c]));
    for (std::size_t j = 0; j < c; ++j)
        for (std::size_t v : g.pendants[j]) cfg.pendant_angles.push_back(direction(g.cycle[j], v));
    return cfg;
}

/// Minimum-norm Gauss-Newton projection onto the closure constraints with
/// cycle_angles[0] held fixed. Pendant angles are left untouched.
inline AngleConfig restore_closure(AngleConfig cfg, int max_steps = 50) {
    const std::size_t c = cfg.cycle_angles.size();
    for (int it = 0; it < max_steps; ++it) {
        const Point2 h = closure_vector(cfg);
        if (norm(h) <= 1e-15) break;
        // J is 2 x (c-1), column j = d unit(theta_j) / d theta_j.
        double a = 0, b = 0, d = 0;
        for (std::size_t j = 1; j < c; ++j) {
            const double sx = -std::sin(cfg.cycle_angles[j]);
            const double sy = std::cos(cfg.cycle_angles[j]);
            a += sx * sx;
            b += sx * sy;
            d += sy * sy;
        }
        const double det = a * d - b * b;
        if (det == 0.0) break;
        const double wx = (d * h.x - b * h.y) / det;
        const double wy = (-b * h.x + a * h.y) / det;
        for (std::size_t j = 1; j < c; ++j)
            cfg.cycle_angles[j] -= -std::sin(cfg.cycle_angles[j]) * wx + std::cos(cfg.cycle_angles[j]) * wy;
    }
    return cfg;
}

} // namespace smallpoly

#endif // SMALLPOLY_CONSTRUCTIONS_HPP
