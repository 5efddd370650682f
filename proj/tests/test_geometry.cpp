#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

using namespace smallpoly;
using namespace testing_support;

TEST(Perimeter, UnitSquare) { EXPECT_DOUBLE_EQ(perimeter(unit_square()), 4.0); }

TEST(Perimeter, UnitTriangle) { EXPECT_NEAR(perimeter(unit_triangle()), 3.0, 1e-15); }

TEST(Perimeter, Fixture) { EXPECT_NEAR(perimeter(fixture_polygon()), 3.1403311569546, 1e-12); }

TEST(Perimeter, RegularPolygonMatchesClosedForm) {
    for (int k : {3, 7, 12, 64, 99}) {
        std::vector<Point2> v;
        for (int i = 0; i < k; ++i) v.push_back(unit(2 * std::numbers::pi * i / k));
        const double side = 2 * std::sin(std::numbers::pi / k);
        EXPECT_NEAR(perimeter(ConvexPolygon(v)), k * side, 1e-14 * k * side) << k;
    }
}

TEST(NeumaierSum, RecoversCancelledTerms) {
    NeumaierSum s;
    for (double v : {1.0, 1e100, 1.0, -1e100}) s.add(v);
    EXPECT_EQ(s.value(), 2.0);
}

TEST(ConvexPolygon, RejectsTooFewVertices) {
    EXPECT_THROW(ConvexPolygon({{0, 0}, {1, 0}}), ValidationError);
}

TEST(ConvexPolygon, RejectsNonFinite) {
    EXPECT_THROW(ConvexPolygon({{0, 0}, {1, std::numeric_limits<double>::quiet_NaN()}, {0, 1}}), ValidationError);
    EXPECT_THROW(ConvexPolygon({{0, 0}, {1, 0}, {0, std::numeric_limits<double>::infinity()}}), ValidationError);
}

TEST(ConvexPolygon, RejectsCoincidentVertices) {
    EXPECT_THROW(ConvexPolygon({{0, 0}, {1, 0}, {1, 0}, {0, 1}}), ValidationError);
}

TEST(ConvexPolygon, RejectsClockwise) {
    try {
        ConvexPolygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
        FAIL() << "clockwise square accepted";
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find("counterclockwise"), std::string::npos);
    }
}

TEST(ConvexPolygon, RejectsDoubleWinding) {
    std::vector<Point2> v;
    for (int i = 0; i < 10; ++i) v.push_back(unit(4 * std::numbers::pi * i / 10 + 0.1));
    EXPECT_THROW(ConvexPolygon{v}, ValidationError);
}

TEST(IsConvex, Examples) {
    const std::vector<Point2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    EXPECT_TRUE(is_convex(square));
    const std::vector<Point2> bowtie{{0, 0}, {1, 1}, {1, 0}, {0, 1}};
    EXPECT_FALSE(is_convex(bowtie));
    EXPECT_TRUE(is_convex(fixture_polygon().vertices()));
}

TEST(IsConvex, ToleratesCollinearTriplesAndEitherOrientation) {
    const std::vector<Point2> with_midpoint{{0, 0}, {0.5, 0}, {1, 0}, {1, 1}, {0, 1}};
    EXPECT_TRUE(is_convex(with_midpoint));
    const std::vector<Point2> clockwise{{0, 0}, {0, 1}, {1, 1}, {1, 0}};
    EXPECT_TRUE(is_convex(clockwise));
    const std::vector<Point2> flat{{0, 0}, {1, 0}, {2, 0}};
    EXPECT_FALSE(is_convex(flat));
}

TEST(Diameter, UnitSquare) {
    const auto d = diameter(unit_square());
    EXPECT_DOUBLE_EQ(d.length, std::sqrt(2.0));
    EXPECT_EQ(d.pair, (std::pair<std::size_t, std::size_t>{0, 2}));
}

TEST(Diameter, UnitTriangleAndFixture) {
    EXPECT_NEAR(diameter(unit_triangle()).length, 1.0, 1e-15);
    EXPECT_NEAR(diameter(fixture_polygon()).length, 1.0, 1e-9);
}

TEST(Diameter, CalipersMatchBruteForceOnRandomPolygons) {
    std::mt19937_64 rng(20240601);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto p = random_convex_polygon(rng);
        const auto fast = diameter(p);
        const auto slow = diameter_brute_force(p);
        ASSERT_NEAR(fast.length, slow.length, 1e-14 * p.scale()) << "trial " << trial << " n=" << p.size();
        ASSERT_EQ(fast.pair, slow.pair) << "trial " << trial;
    }
}

TEST(Diameter, TiesGoToLowestPair) {
    // Both diagonals of a square or rectangle tie exactly.
    EXPECT_EQ(diameter(unit_square()).pair.first, 0u);
    const ConvexPolygon rect({{0, 0}, {2, 0}, {2, 1}, {0, 1}});
    EXPECT_EQ(diameter(rect).pair, (std::pair<std::size_t, std::size_t>{0, 2}));
}

TEST(RigidMotion, PerimeterAndDiameterInvariant) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = random_convex_polygon(rng);
        const auto q = rigid_motion(p, 3.2 * u(rng), {5 * u(rng), 5 * u(rng)});
        EXPECT_NEAR(perimeter(q), perimeter(p), 1e-12 * perimeter(p));
        EXPECT_NEAR(diameter(q).length, diameter(p).length, 1e-12 * diameter(p).length);
    }
}

TEST(Canonicalize, FixtureIsAlreadyCanonical) {
    const auto p = fixture_polygon();
    const auto c = canonicalize(p);
    for (std::size_t i = 0; i < p.size(); ++i) {
        EXPECT_NEAR(c[i].x, p[i].x, 1e-15) << i;
        EXPECT_NEAR(c[i].y, p[i].y, 1e-15) << i;
    }
}

TEST(Canonicalize, RotatedFixtureReturnsToFixture) {
    const auto p = fixture_polygon();
    const auto c = canonicalize(rigid_motion(p, 37.0 * std::numbers::pi / 180.0, {0.3, -1.7}));
    for (std::size_t i = 0; i < p.size(); ++i) {
        EXPECT_NEAR(c[i].x, p[i].x, 1e-12) << i;
        EXPECT_NEAR(c[i].y, p[i].y, 1e-12) << i;
    }
}

TEST(Canonicalize, IdempotentAndMetricPreserving) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = random_convex_polygon(rng);
        const auto once = canonicalize(p);
        const auto twice = canonicalize(once);
        for (std::size_t i = 0; i < p.size(); ++i) {
            ASSERT_NEAR(twice[i].x, once[i].x, 1e-14 * p.scale());
            ASSERT_NEAR(twice[i].y, once[i].y, 1e-14 * p.scale());
        }
        EXPECT_EQ(once[p.size() - 1], (Point2{0, 0}));
        EXPECT_EQ(once[0].y, 0.0);
        EXPECT_NEAR(perimeter(once), perimeter(p), 1e-12 * perimeter(p));
        EXPECT_NEAR(diameter(once).length, diameter(p).length, 1e-12 * diameter(p).length);
    }
}

TEST(PairwiseDistances, TriangleAndSquare) {
    const auto t = pairwise_distances(unit_triangle());
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            if (i != j) {
                EXPECT_NEAR(t(i, j), 1.0, 1e-15);
            }
    const auto s = pairwise_distances(unit_square());
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            if (i == j) continue;
            const double expect = (i + j) % 2 == 0 ? std::sqrt(2.0) : 1.0;
            EXPECT_DOUBLE_EQ(s(i, j), expect);
        }
}

TEST(PairwiseDistances, FixtureHasThirtyTwoChordsAndAClearGap) {
    const auto m = pairwise_distances(fixture_polygon());
    const double top = m.max_entry();
    int chords = 0;
    double next = 0.0;
    for (std::size_t i = 0; i < 32; ++i)
        for (std::size_t j = i + 1; j < 32; ++j) {
            if (m(i, j) >= top - 1e-6)
                ++chords;
            else
                next = std::max(next, m(i, j));
        }
    EXPECT_EQ(chords, 32);
    EXPECT_LT(next, top - 5e-3); // the largest non-chord distance is far below the chords
}

TEST(PairwiseDistances, SymmetricWithTriangleInequality) {
    std::mt19937_64 rng(3);
    const auto p = random_convex_polygon(rng);
    const auto m = pairwise_distances(p);
    const double eps = 4 * std::numeric_limits<double>::epsilon() * p.size() * m.max_entry();
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j) {
            EXPECT_EQ(m(i, j), m(j, i));
            for (std::size_t k = 0; k < p.size(); ++k) ASSERT_LE(m(i, k), m(i, j) + m(j, k) + eps);
        }
}
