#ifndef SMALLPOLY_DIAMGRAPH_HPP
#define SMALLPOLY_DIAMGRAPH_HPP

#include "errors.hpp"
#include "geometry.hpp"

#include <algorithm>
#include <compare>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace smallpoly {

/// Cycle length plus pendant counts per cycle vertex. Whether the
/// composition is in some concrete cycle order or in canonical
/// (lexicographically minimal) form depends on where it came from.
struct Topology {
    int n = 0;
    int c = 0;
    std::vector<int> composition;

    /// Smaller cycle first, then lexicographic composition.
    friend auto operator<=>(const Topology&, const Topology&) = default;
    friend bool operator==(const Topology&, const Topology&) = default;
};

/// Minimal representative of a composition over all rotations and reflections.
inline std::vector<int> canonical_composition(const std::vector<int>& comp) {
    std::vector<int> best = comp;
    std::vector<int> work = comp;
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t r = 0; r < work.size(); ++r) {
            std::rotate(work.begin(), work.begin() + 1, work.end());
            best = std::min(best, work);
        }
        std::reverse(work.begin(), work.end());
    }
    return best;
}

inline Topology canonical(Topology t) {
    t.composition = canonical_composition(t.composition);
    return t;
}

/// Structural validity of a topology; returns an empty string when valid.
inline std::string topology_problem(const Topology& t) {
    if (t.c < 3 || t.c % 2 == 0) return "cycle length must be odd and at least 3";
    if (t.c > t.n) return "cycle length exceeds vertex count";
    if (static_cast<int>(t.composition.size()) != t.c) return "composition length differs from cycle length";
    if (std::any_of(t.composition.begin(), t.composition.end(), [](int k) { return k < 0; }))
        return "negative pendant count";
    if (std::accumulate(t.composition.begin(), t.composition.end(), 0) != t.n - t.c)
        return "pendant counts do not sum to n - c";
    return {};
}

inline std::string to_string(const Topology& t) {
    std::string s = "(" + std::to_string(t.n) + ", " + std::to_string(t.c) + ", [";
    for (std::size_t i = 0; i < t.composition.size(); ++i)
        s += (i ? "," : "") + std::to_string(t.composition[i]);
    return s + "])";
}

/// Pendants spread as evenly as possible in cycle order.
inline Topology balanced_topology(int n, int c) {
    Topology t{n, c, std::vector<int>(static_cast<std::size_t>(std::max(c, 0)), 0)};
    const int m = n - c;
    for (int j = 0; j < c; ++j) t.composition[j] = (j + 1) * m / c - j * m / c;
    return t;
}

/// Unit-distance graph of a small polygon.
struct DiameterGraph {
    std::size_t n = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges; ///< sorted, i < j
    std::vector<std::size_t> cycle;                         ///< polygon indices in cycle order
    std::vector<std::vector<std::size_t>> pendants;         ///< pendant vertices per cycle position
};

namespace detail {

class UnionFind {
public:
    explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    std::size_t find(std::size_t a) {
        while (parent_[a] != a) a = parent_[a] = parent_[parent_[a]];
        return a;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent_[std::max(a, b)] = std::min(a, b);
        return true;
    }

private:
    std::vector<std::size_t> parent_;
};

} // namespace detail

/// Builds and validates the odd-cycle-plus-pendants structure from an edge list.
inline DiameterGraph make_diameter_graph(std::size_t n, std::vector<std::pair<std::size_t, std::size_t>> edges) {
    for (auto& e : edges)
        if (e.first > e.second) std::swap(e.first, e.second);
    std::sort(edges.begin(), edges.end());

    if (edges.size() != n)
        throw StructureError(StructureError::Kind::EdgeCount,
                             "diameter graph has " + std::to_string(edges.size()) + " edges, expected " +
                                 std::to_string(n));

    std::vector<std::vector<std::size_t>> adj(n);
    detail::UnionFind uf(n);
    std::size_t redundant = 0;
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
        if (!uf.unite(a, b)) ++redundant;
    }
    // n edges on n vertices: connected iff exactly one edge closes a cycle.
    if (redundant != 1)
        throw StructureError(StructureError::Kind::CycleCount,
                             "diameter graph has " + std::to_string(redundant) + " independent cycles, expected 1");

    std::vector<std::size_t> deg(n);
    std::vector<std::size_t> leaves;
    std::vector<bool> on_cycle(n, true);
    for (std::size_t v = 0; v < n; ++v) {
        deg[v] = adj[v].size();
        if (deg[v] == 1) leaves.push_back(v);
    }
    while (!leaves.empty()) {
        const std::size_t v = leaves.back();
        leaves.pop_back();
        on_cycle[v] = false;
        for (std::size_t w : adj[v])
            if (on_cycle[w] && --deg[w] == 1) leaves.push_back(w);
    }

    DiameterGraph g;
    g.n = n;
    g.edges = std::move(edges);
    std::size_t start = n;
    for (std::size_t v = 0; v < n && start == n; ++v)
        if (on_cycle[v]) start = v;

    auto cycle_neighbours = [&](std::size_t v) {
        std::vector<std::size_t> out;
        for (std::size_t w : adj[v])
            if (on_cycle[w]) out.push_back(w);
        std::sort(out.begin(), out.end());
        return out;
    };
    g.cycle.push_back(start);
    std::size_t prev = start;
    std::size_t cur = cycle_neighbours(start).front();
    while (cur != start) {
        g.cycle.push_back(cur);
        const auto nb = cycle_neighbours(cur);
        const std::size_t next = nb[0] == prev ? nb[1] : nb[0];
        prev = cur;
        cur = next;
    }
    if (g.cycle.size() % 2 == 0)
        throw StructureError(StructureError::Kind::EvenCycle,
                             "diameter graph cycle has even length " + std::to_string(g.cycle.size()));

    std::vector<std::size_t> position(n, n);
    for (std::size_t k = 0; k < g.cycle.size(); ++k) position[g.cycle[k]] = k;
    g.pendants.assign(g.cycle.size(), {});
    for (std::size_t v = 0; v < n; ++v) {
        if (on_cycle[v]) continue;
        if (adj[v].size() != 1 || !on_cycle[adj[v][0]])
            throw StructureError(StructureError::Kind::DeepPendant,
                                 "vertex " + std::to_string(v) + " hangs off a non-cycle vertex");
        g.pendants[position[adj[v][0]]].push_back(v);
    }
    return g;
}

/// Graph of all vertex pairs within relative tolerance tol_edge of the diameter.
inline DiameterGraph extract(const ConvexPolygon& p, double tol_edge = 1e-6) {
    if (!(tol_edge > 0.0 && tol_edge < 0.1)) throw DomainError("tol_edge must lie in (0, 0.1)");
    const double cutoff = diameter(p).length * (1.0 - tol_edge);
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j)
            if (distance(p[i], p[j]) >= cutoff) edges.emplace_back(i, j);
    return make_diameter_graph(p.size(), std::move(edges));
}

/// Pendant counts in the graph's own cycle order.
inline Topology topology_in_cycle_order(const DiameterGraph& g) {
    Topology t{static_cast<int>(g.n), static_cast<int>(g.cycle.size()), {}};
    for (const auto& ps : g.pendants) t.composition.push_back(static_cast<int>(ps.size()));
    return t;
}

inline Topology topology_of(const DiameterGraph& g) { return canonical(topology_in_cycle_order(g)); }

/// Every two edges share an endpoint or their open segments cross.
inline bool check_thrackle(const DiameterGraph& g, const ConvexPolygon& p) {
    const double s = p.scale();
    const double slack = tol_convex * s * s;
    auto side = [&](Point2 a, Point2 b, Point2 c) {
        const double o = orient(a, b, c);
        return o > slack ? 1 : (o < -slack ? -1 : 0);
    };
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        for (std::size_t j = i + 1; j < g.edges.size(); ++j) {
            const auto [a, b] = g.edges[i];
            const auto [c, d] = g.edges[j];
            if (a == c || a == d || b == c || b == d) continue;
            const Point2 pa = p[a], pb = p[b], pc = p[c], pd = p[d];
            const int s1 = side(pa, pb, pc), s2 = side(pa, pb, pd);
            const int s3 = side(pc, pd, pa), s4 = side(pc, pd, pb);
            if (!(s1 * s2 < 0 && s3 * s4 < 0)) return false;
        }
    }
    return true;
}

} // namespace smallpoly

#endif // SMALLPOLY_DIAMGRAPH_HPP
