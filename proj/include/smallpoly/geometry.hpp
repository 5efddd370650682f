#ifndef SMALLPOLY_GEOMETRY_HPP
#define SMALLPOLY_GEOMETRY_HPP

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <sstream>
#include <utility>
#include <vector>

namespace smallpoly {

/// Relative tolerance (to scale^2) for cross-product sign tests.
inline constexpr double tol_convex = 1e-12;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
    friend bool operator==(Point2 a, Point2 b) = default;
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }

/// Twice the signed area of triangle (a, b, c); positive for a left turn.
inline double orient(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - b); }

inline Point2 unit(double angle) { return {std::cos(angle), std::sin(angle)}; }

inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Neumaier's improved Kahan summation.
class NeumaierSum {
public:
    void add(double v) {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Largest absolute coordinate; 1 for an all-zero input so tolerances stay meaningful.
inline double coordinate_scale(std::span<const Point2> pts) {
    double s = 0.0;
    for (const auto& p : pts) s = std::max({s, std::abs(p.x), std::abs(p.y)});
    return s > 0.0 ? s : 1.0;
}

namespace detail {

inline double signed_area2(std::span<const Point2> v) {
    NeumaierSum s;
    for (std::size_t i = 0; i < v.size(); ++i) s.add(cross(v[i], v[(i + 1) % v.size()]));
    return s.value();
}

/// Sum of exterior angles; +-2*pi for a simple convex loop.
inline double total_turning(std::span<const Point2> v) {
    const std::size_t n = v.size();
    double turn = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 e0 = v[(i + 1) % n] - v[i];
        const Point2 e1 = v[(i + 2) % n] - v[(i + 1) % n];
        turn += std::atan2(cross(e0, e1), dot(e0, e1));
    }
    return turn;
}

} // namespace detail

/// True iff the vertices form a convex loop in either orientation.
/// Near-collinear triples (|cross| <= tol_convex * scale^2) count as convex.
inline bool is_convex(std::span<const Point2> v) {
    const std::size_t n = v.size();
    if (n < 3) return false;
    for (const auto& p : v)
        if (!is_finite(p)) return false;
    const double scale = coordinate_scale(v);
    const double slack = tol_convex * scale * scale;
    for (std::size_t i = 0; i < n; ++i)
        if (distance(v[i], v[(i + 1) % n]) <= tol_convex * scale) return false;

    bool pos = false;
    bool neg = false;
    for (std::size_t i = 0; i < n; ++i) {
        const double c = orient(v[i], v[(i + 1) % n], v[(i + 2) % n]);
        if (c > slack) pos = true;
        if (c < -slack) neg = true;
    }
    if (pos == neg) return false; // mixed signs, or everything collinear
    const double turn = std::abs(detail::total_turning(v));
    return std::abs(turn - 2.0 * std::numbers::pi) < 1e-6;
}

/// Vertices in counterclockwise convex position, n >= 3.
class ConvexPolygon {
public:
    explicit ConvexPolygon(std::vector<Point2> vertices) : v_(std::move(vertices)) { validate(); }

    std::size_t size() const noexcept { return v_.size(); }
    const Point2& operator[](std::size_t i) const { return v_[i]; }
    const Point2& vertex(std::size_t i) const { return v_[i % v_.size()]; }
    std::span<const Point2> vertices() const noexcept { return v_; }
    double scale() const { return coordinate_scale(v_); }

    friend bool operator==(const ConvexPolygon&, const ConvexPolygon&) = default;

private:
    void validate() const {
        if (v_.size() < 3)
            throw ValidationError("polygon needs at least 3 vertices, got " + std::to_string(v_.size()));
        for (std::size_t i = 0; i < v_.size(); ++i)
            if (!is_finite(v_[i]))
                throw ValidationError("vertex " + std::to_string(i) + " has a non-finite coordinate");
        const double s = coordinate_scale(v_);
        const std::size_t n = v_.size();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (distance(v_[i], v_[j]) <= tol_convex * s)
                    throw ValidationError("vertices " + std::to_string(i) + " and " + std::to_string(j) +
                                          " coincide");
        for (std::size_t i = 0; i < n; ++i) {
            if (orient(v_[i], v_[(i + 1) % n], v_[(i + 2) % n]) < -tol_convex * s * s) {
                std::ostringstream os;
                os << "vertices are not in counterclockwise convex position (right turn at vertex "
                   << (i + 1) % n << ")";
                throw ValidationError(os.str());
            }
        }
        if (std::abs(detail::total_turning(v_) - 2.0 * std::numbers::pi) > 1e-6)
            throw ValidationError("vertex loop does not turn exactly once counterclockwise");
    }

    std::vector<Point2> v_;
};

inline double perimeter(const ConvexPolygon& p) {
    NeumaierSum s;
    for (std::size_t i = 0; i < p.size(); ++i) s.add(distance(p.vertex(i), p.vertex(i + 1)));
    return s.value();
}

struct Diameter {
    double length = 0.0;
    std::pair<std::size_t, std::size_t> pair{0, 0}; ///< i < j
};

namespace detail {

inline void offer(Diameter& best, const ConvexPolygon& p, std::size_t i, std::size_t j) {
    if (i == j) return;
    if (i > j) std::swap(i, j);
    const double d = distance(p[i], p[j]);
    if (d > best.length || (d == best.length && std::pair{i, j} < best.pair)) best = {d, {i, j}};
}

} // namespace detail

/// Maximum vertex distance by rotating calipers. Exact ties go to the
/// lexicographically smallest index pair.
inline Diameter diameter(const ConvexPolygon& p) {
    const std::size_t n = p.size();
    Diameter best{-1.0, {0, 0}};
    std::size_t k = 1;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t ni = (i + 1) % n;
        // k only moves forward; the guard bounds it on degenerate input.
        for (std::size_t guard = 0; guard < n; ++guard) {
            const std::size_t nk = (k + 1) % n;
            if (std::abs(orient(p[i], p[ni], p[nk])) > std::abs(orient(p[i], p[ni], p[k])))
                k = nk;
            else
                break;
        }
        const std::size_t nk = (k + 1) % n;
        detail::offer(best, p, i, k);
        detail::offer(best, p, ni, k);
        detail::offer(best, p, i, nk);
        detail::offer(best, p, ni, nk);
    }
    return best;
}

/// O(n^2) reference for the calipers; same tie rule.
inline Diameter diameter_brute_force(const ConvexPolygon& p) {
    Diameter best{-1.0, {0, 0}};
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) detail::offer(best, p, i, j);
    return best;
}

/// Rigid motion putting the last vertex at the origin and the first on the
/// positive x-axis, reflecting if needed so the result is counterclockwise.
inline ConvexPolygon canonicalize(const ConvexPolygon& p) {
    const std::size_t n = p.size();
    const Point2 origin = p[n - 1];
    const Point2 first = p[0] - origin;
    const double r = std::hypot(first.x, first.y);
    const double c = first.x / r;
    const double s = first.y / r;
    std::vector<Point2> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Point2 d = p[i] - origin;
        out[i] = {c * d.x + s * d.y, -s * d.x + c * d.y};
    }
    out[0] = {r, 0.0};
    out[n - 1] = {0.0, 0.0};
    if (detail::signed_area2(out) < 0.0)
        for (auto& q : out) q.y = -q.y;
    return ConvexPolygon(std::move(out));
}

/// Symmetric n x n matrix of vertex distances.
class DistanceMatrix {
public:
    explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double v) {
        d_[i * n_ + j] = v;
        d_[j * n_ + i] = v;
    }
    double max_entry() const { return d_.empty() ? 0.0 : *std::max_element(d_.begin(), d_.end()); }

private:
    std::size_t n_;
    std::vector<double> d_;
};

inline DistanceMatrix pairwise_distances(const ConvexPolygon& p) {
    DistanceMatrix m(p.size());
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = i + 1; j < p.size(); ++j) m.set(i, j, distance(p[i], p[j]));
    return m;
}

/// Copy of p scaled about the origin by factor s > 0.
inline ConvexPolygon scaled(const ConvexPolygon& p, double s) {
    std::vector<Point2> out(p.vertices().begin(), p.vertices().end());
    for (auto& q : out) q = s * q;
    return ConvexPolygon(std::move(out));
}

} // namespace smallpoly

#endif // SMALLPOLY_GEOMETRY_HPP
