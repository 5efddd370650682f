#ifndef SMALLPOLY_CERTIFY_HPP
#define SMALLPOLY_CERTIFY_HPP

#include "constructions.hpp"
#include "diamgraph.hpp"
#include "geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <string>
#include <utility>

namespace smallpoly {

/// Closed interval [lo, hi] known to contain an exact real value.
struct BoundedValue {
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    double mid() const { return lo + 0.5 * (hi - lo); }
    bool contains(double v) const { return lo <= v && v <= hi; }
};

// Directed rounding without touching the FPU mode: every operation is done
// in round-to-nearest, the exact rounding error is recovered with TwoSum or
// FMA, and the result is nudged one ulp outward when the error points that
// way. Correct rounding of +, *, sqrt keeps the nudge to a single ulp.
namespace rounding {

inline double next_down(double v) { return std::nextafter(v, -std::numeric_limits<double>::infinity()); }
inline double next_up(double v) { return std::nextafter(v, std::numeric_limits<double>::infinity()); }

/// Knuth's TwoSum: s + e == a + b exactly.
inline std::pair<double, double> two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double e = (a - (s - bb)) + (b - bb);
    return {s, e};
}

inline double add_down(double a, double b) {
    const auto [s, e] = two_sum(a, b);
    return e < 0.0 ? next_down(s) : s;
}
inline double add_up(double a, double b) {
    const auto [s, e] = two_sum(a, b);
    return e > 0.0 ? next_up(s) : s;
}
inline double mul_down(double a, double b) {
    const double p = a * b;
    return std::fma(a, b, -p) < 0.0 ? next_down(p) : p;
}
inline double mul_up(double a, double b) {
    const double p = a * b;
    return std::fma(a, b, -p) > 0.0 ? next_up(p) : p;
}
/// Requires s >= 0.
inline double sqrt_down(double s) {
    const double r = std::sqrt(s);
    return std::fma(r, r, -s) > 0.0 ? next_down(r) : r;
}
inline double sqrt_up(double s) {
    const double r = std::sqrt(s);
    return std::fma(r, r, -s) < 0.0 ? next_up(r) : r;
}

/// Interval for b - a.
inline BoundedValue sub(double b, double a) {
    const auto [s, e] = two_sum(b, -a);
    if (e > 0.0) return {s, next_up(s)};
    if (e < 0.0) return {next_down(s), s};
    return {s, s};
}

} // namespace rounding

/// Enclosure of the exact Euclidean distance between two double-precision points.
inline BoundedValue certified_distance(Point2 a, Point2 b) {
    using namespace rounding;
    auto abs_interval = [](BoundedValue d) -> BoundedValue {
        if (d.lo >= 0.0) return d;
        if (d.hi <= 0.0) return {-d.hi, -d.lo};
        return {0.0, std::max(-d.lo, d.hi)};
    };
    const BoundedValue dx = abs_interval(sub(b.x, a.x));
    const BoundedValue dy = abs_interval(sub(b.y, a.y));
    const double s_lo = add_down(mul_down(dx.lo, dx.lo), mul_down(dy.lo, dy.lo));
    const double s_hi = add_up(mul_up(dx.hi, dx.hi), mul_up(dy.hi, dy.hi));
    return {sqrt_down(s_lo), sqrt_up(s_hi)};
}

inline BoundedValue certified_perimeter(const ConvexPolygon& p) {
    BoundedValue sum{0.0, 0.0};
    for (std::size_t i = 0; i < p.size(); ++i) {
        const BoundedValue d = certified_distance(p.vertex(i), p.vertex(i + 1));
        sum.lo = rounding::add_down(sum.lo, d.lo);
        sum.hi = rounding::add_up(sum.hi, d.hi);
    }
    return sum;
}

/// Enclosure of the maximum vertex distance; every pair is bounded, so no
/// caliper decision can be fooled by rounding.
inline BoundedValue certified_diameter(const ConvexPolygon& p) {
    BoundedValue best{0.0, 0.0};
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) {
            const BoundedValue d = certified_distance(p[i], p[j]);
            best.lo = std::max(best.lo, d.lo);
            best.hi = std::max(best.hi, d.hi);
        }
    return best;
}

/// Leading significant decimal digits shared by both interval endpoints.
inline int certified_digits(BoundedValue v) {
    if (v.lo == v.hi) return std::numeric_limits<double>::max_digits10;
    char a[40], b[40];
    std::snprintf(a, sizeof a, "%.25e", v.lo);
    std::snprintf(b, sizeof b, "%.25e", v.hi);
    const std::string sa(a), sb(b);
    if (sa.substr(sa.find('e')) != sb.substr(sb.find('e'))) return 0;
    int digits = 0;
    for (std::size_t i = 0; i < sa.size() && sa[i] != 'e'; ++i) {
        if (sa[i] != sb[i]) break;
        if (sa[i] >= '0' && sa[i] <= '9') ++digits;
    }
    return digits;
}

struct VerificationReport {
    std::size_t n = 0;
    BoundedValue perimeter;
    BoundedValue diameter;
    bool convex = false;
    bool unit_diameter = false; ///< diameter enclosure within 1e-9 of 1
    bool thrackle = false;
    DiameterGraph graph;
    Topology graph_topology; ///< canonical
    double bound_gap = 0.0;  ///< upper_bound(n) - perimeter.lo
    int certified_digits = 0;

    bool ok() const { return convex && unit_diameter && thrackle; }
};

/// Tolerance on |diameter - 1| for calling a polygon small.
inline constexpr double tol_unit_diameter = 1e-9;

/// Full check of a claimed small polygon. Extraction failures propagate as
/// StructureError with the polygon size prepended.
inline VerificationReport verify(const ConvexPolygon& p, double tol_edge = 1e-6) {
    VerificationReport r;
    r.n = p.size();
    r.convex = is_convex(p.vertices());
    r.perimeter = certified_perimeter(p);
    r.diameter = certified_diameter(p);
    r.unit_diameter = r.diameter.lo >= 1.0 - tol_unit_diameter && r.diameter.hi <= 1.0 + tol_unit_diameter;
    try {
        r.graph = extract(p, tol_edge);
    } catch (const StructureError& e) {
        throw StructureError(e.kind(), std::to_string(p.size()) + "-gon: " + e.what());
    }
    r.graph_topology = topology_of(r.graph);
    r.thrackle = check_thrackle(r.graph, p);
    r.bound_gap = upper_bound(static_cast<int>(p.size())) - r.perimeter.lo;
    r.certified_digits = certified_digits(r.perimeter);
    return r;
}

} // namespace smallpoly

#endif // SMALLPOLY_CERTIFY_HPP
