#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace smallpoly;
using namespace testing_support;

// Closed forms evaluated at 40 digits and rounded to double.
constexpr double bound_4 = 3.0614674589207183;
constexpr double bound_5 = 3.0901699437494742;
constexpr double bound_32 = 3.140331156954753;

TEST(UpperBound, Values) {
    EXPECT_NEAR(upper_bound(3), 3.0, 1e-15);
    EXPECT_NEAR(upper_bound(4), bound_4, 1e-15);
    EXPECT_NEAR(upper_bound(5), bound_5, 1e-15);
    EXPECT_EQ(format_real(upper_bound(32), 16), "3.140331156954753");
    EXPECT_NEAR(upper_bound(32), bound_32, 1e-15);
}

TEST(UpperBound, DomainError) {
    EXPECT_THROW(upper_bound(2), DomainError);
    EXPECT_THROW(upper_bound(-1), DomainError);
}

TEST(UpperBound, IncreasesTowardPiFromBelow) {
    double prev = upper_bound(3);
    for (int n = 4; n <= 1000000; ++n) {
        const double b = upper_bound(n);
        ASSERT_LE(prev, b + 2e-15) << n; // growth falls below a few ulps for large n
        ASSERT_LT(b, std::numbers::pi) << n;
        prev = b;
        if (n < 1000) {
            ASSERT_LT(upper_bound(n - 1), b);
        }
    }
    EXPECT_NEAR(prev, std::numbers::pi, 1e-11);
}

TEST(RegularSmall, Examples) {
    EXPECT_NEAR(perimeter(regular_small(3)), 3.0, 1e-15);
    EXPECT_NEAR(perimeter(regular_small(5)), bound_5, 1e-15);
    EXPECT_LT(perimeter(regular_small(32)), bound_32);
    EXPECT_THROW(regular_small(2), DomainError);
}

TEST(RegularSmall, UnitDiameterAndCanonicalPose) {
    for (int n = 3; n <= 99; ++n) {
        const auto p = regular_small(n);
        EXPECT_NEAR(diameter(p).length, 1.0, 1e-15) << n;
        EXPECT_EQ(p[p.size() - 1], (Point2{0, 0}));
        EXPECT_EQ(p[0].y, 0.0);
    }
}

TEST(RegularSmall, EqualityForOddDeficitForEven) {
    for (int n = 3; n <= 99; ++n) {
        const double gap = upper_bound(n) - perimeter(regular_small(n));
        if (n % 2)
            EXPECT_LE(std::abs(gap), 1e-12) << n;
        else
            EXPECT_GE(gap, 1e-6) << n;
    }
}

TEST(RegularSmall, EvenGapMatchesClosedForm) {
    // 64 sin(pi/64) - 32 sin(pi/32), evaluated at 40 digits
    EXPECT_NEAR(upper_bound(32) - perimeter(regular_small(32)), 0.0037826664088136485, 1e-14);
}

TEST(ReferenceRecords, Table) {
    const auto recs = reference_records();
    ASSERT_EQ(recs.size(), 5u);
    EXPECT_EQ(recs.front().cycle, 3);
    EXPECT_EQ(recs.front().perimeter, 3.140323421103532);
    EXPECT_EQ(recs.back().cycle, 21);
    EXPECT_EQ(recs.back().perimeter, 3.140331156954614);
    const std::vector<int> cycles{3, 17, 23, 21, 21};
    for (std::size_t i = 0; i < recs.size(); ++i) {
        EXPECT_EQ(recs[i].cycle, cycles[i]);
        EXPECT_LT(recs[i].perimeter, upper_bound(32));
        if (i) {
            EXPECT_GT(recs[i].perimeter, recs[i - 1].perimeter);
        }
    }
}

TEST(StarInit, EquilateralTriangle) {
    const auto cfg = star_init({3, 3, {0, 0, 0}});
    EXPECT_LE(closure_residual(cfg), 1e-15);
    const auto r = realize(cfg);
    EXPECT_NEAR(perimeter(r.polygon), 3.0, 1e-14);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = i + 1; j < 3; ++j) EXPECT_NEAR(distance(r.polygon[i], r.polygon[j]), 1.0, 1e-15);
}

TEST(StarInit, QuadrilateralWithPendant) {
    const auto r = realize(star_init({4, 3, {1, 0, 0}}));
    EXPECT_EQ(r.polygon.size(), 4u);
    EXPECT_TRUE(is_convex(r.polygon.vertices()));
    EXPECT_NEAR(diameter(r.polygon).length, 1.0, 1e-15);
}

TEST(StarInit, BalancedThirtyTwo) {
    const auto cfg = star_init(balanced_topology(32, 21));
    const auto r = realize(cfg);
    EXPECT_TRUE(is_convex(r.polygon.vertices()));
    EXPECT_NEAR(diameter(r.polygon).length, 1.0, 1e-14);
    EXPECT_NEAR(perimeter(r.polygon), 3.1403, 0.1 * 3.1403);
    EXPECT_EQ(r.edges.size(), 32u);
    for (auto [a, b] : r.edges) EXPECT_NEAR(distance(r.polygon[a], r.polygon[b]), 1.0, 1e-14 * 32);
}

TEST(StarInit, ClosesForEveryOddCycle) {
    for (int c = 3; c <= 31; c += 2) {
        EXPECT_LE(closure_residual(star_init(balanced_topology(32, c))), 1e-12) << c;
        EXPECT_LE(closure_residual(star_init(balanced_topology(c, c))), 1e-12) << c;
    }
}

TEST(StarInit, RejectsInvalidTopology) {
    EXPECT_THROW(star_init({6, 4, {1, 1, 0, 0}}), ConstructionError);
    EXPECT_THROW(star_init({5, 3, {1, 1, 1}}), ConstructionError);
}

TEST(Realize, RejectsOpenCycle) {
    auto cfg = star_init({5, 5, {0, 0, 0, 0, 0}});
    cfg.cycle_angles[2] += 0.01;
    EXPECT_THROW(realize(cfg), InfeasibilityError);
}

TEST(Realize, RejectsNonConvexPlacement) {
    auto cfg = star_init({5, 3, {2, 0, 0}});
    // Two pendants on the same ray coincide.
    cfg.pendant_angles[1] = cfg.pendant_angles[0];
    EXPECT_THROW(realize(cfg), RealizationError);
}

TEST(Realize, FixtureRoundTrip) {
    const auto p = fixture_polygon();
    const auto cfg = measure_config(p, extract(p));
    EXPECT_LE(closure_residual(cfg), 1e-12);
    const auto r = realize(cfg);
    const auto c = canonicalize(r.polygon);
    ASSERT_EQ(c.size(), p.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        EXPECT_NEAR(c[i].x, p[i].x, 1e-9) << i;
        EXPECT_NEAR(c[i].y, p[i].y, 1e-9) << i;
    }
}

TEST(RestoreClosure, ProjectsPerturbedConfig) {
    auto cfg = star_init(balanced_topology(32, 21));
    for (std::size_t j = 0; j < cfg.cycle_angles.size(); ++j) cfg.cycle_angles[j] += 1e-3 * std::sin(3.0 * j + 1.0);
    ASSERT_GT(closure_residual(cfg), 1e-4);
    const double theta0 = cfg.cycle_angles[0];
    const auto fixed = restore_closure(cfg);
    EXPECT_LE(closure_residual(fixed), 1e-14);
    EXPECT_EQ(fixed.cycle_angles[0], theta0);
    EXPECT_EQ(fixed.pendant_angles, cfg.pendant_angles);
}
