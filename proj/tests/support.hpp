#ifndef SMALLPOLY_TESTS_SUPPORT_HPP
#define SMALLPOLY_TESTS_SUPPORT_HPP

#include <smallpoly/smallpoly.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace testing_support {

using smallpoly::ConvexPolygon;
using smallpoly::Point2;

inline ConvexPolygon fixture_polygon() { return smallpoly::to_polygon(smallpoly::fixture("triacontadigon")); }

inline ConvexPolygon unit_square() { return ConvexPolygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

inline ConvexPolygon unit_triangle() {
    return ConvexPolygon({{0, 0}, {1, 0}, {0.5, std::sqrt(3.0) / 2.0}});
}

/// Strictly convex hull, counterclockwise (Andrew's monotone chain).
inline std::vector<Point2> convex_hull(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    std::vector<Point2> h(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && smallpoly::orient(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
        h[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && smallpoly::orient(h[k - 2], h[k - 1], pts[i - 1]) <= 0) --k;
        h[k++] = pts[i - 1];
    }
    h.resize(k - 1);
    return h;
}

/// Hull of 3..64 points scattered near an ellipse with random pose.
inline ConvexPolygon random_convex_polygon(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> count(3, 64);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (;;) {
        const int m = count(rng);
        const double a = 0.2 + 5.0 * u(rng), b = 0.2 + 5.0 * u(rng);
        const double rot = 2 * std::numbers::pi * u(rng);
        const Point2 shift{10 * u(rng) - 5, 10 * u(rng) - 5};
        std::vector<Point2> pts;
        for (int i = 0; i < m; ++i) {
            const double t = 2 * std::numbers::pi * u(rng);
            const double r = 0.7 + 0.3 * u(rng);
            const Point2 q{a * r * std::cos(t), b * r * std::sin(t)};
            pts.push_back(Point2{std::cos(rot) * q.x - std::sin(rot) * q.y, std::sin(rot) * q.x + std::cos(rot) * q.y} +
                          shift);
        }
        auto hull = convex_hull(std::move(pts));
        if (hull.size() < 3) continue;
        try {
            return ConvexPolygon(std::move(hull));
        } catch (const smallpoly::ValidationError&) {
        }
    }
}

inline ConvexPolygon rigid_motion(const ConvexPolygon& p, double angle, Point2 shift) {
    std::vector<Point2> v;
    for (const auto& q : p.vertices())
        v.push_back(Point2{std::cos(angle) * q.x - std::sin(angle) * q.y, std::sin(angle) * q.x + std::cos(angle) * q.y} +
                    shift);
    return ConvexPolygon(std::move(v));
}

} // namespace testing_support

#endif
