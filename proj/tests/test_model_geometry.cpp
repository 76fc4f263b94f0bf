#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "catsurf/model_geometry.hpp"
#include "catsurf/random.hpp"
#include "test_support.hpp"

using namespace catsurf;
using namespace testsupport;

// ---------------------------------------------------------------------------
// Hyperbolic distance / geodesics / angles
// ---------------------------------------------------------------------------

TEST_CASE("h_distance basic values") {
    HPoint o(1, 0, 0);
    HPoint p(std::cosh(1.0), std::sinh(1.0), 0.0);
    HPoint q(std::cosh(1.0), -std::sinh(1.0), 0.0);
    CHECK(h_distance(o, o) == 0.0);
    CHECK_THAT(h_distance(o, p), Catch::Matchers::WithinAbs(1.0, 1e-14));
    // Symmetric pair across the origin: two unit steps through (1,0,0).
    CHECK_THAT(h_distance(p, q), Catch::Matchers::WithinAbs(2.0, 1e-13));
    CHECK(h_distance(p, q) == h_distance(q, p));
}

TEST_CASE("h_distance is accurate near zero") {
    HPoint o(1, 0, 0);
    for (double s : {1e-9, 1e-7, 1e-5}) {
        HPoint p = h_exp(o, Vec3{0, 1, 0}, s);
        CHECK_THAT(h_distance(o, p), Catch::Matchers::WithinRel(s, 1e-10));
    }
}

TEST_CASE("h_geodesic_point endpoints and midpoint") {
    HPoint p(1, 0, 0);
    HPoint q(std::cosh(2.0), std::sinh(2.0), 0.0);
    CHECK(h_distance(h_geodesic_point(p, q, 0.0), p) < 1e-12);
    CHECK(h_distance(h_geodesic_point(p, q, 1.0), q) < 1e-12);
    HPoint m = h_geodesic_point(p, q, 0.5);
    CHECK_THAT(m.c[0], Catch::Matchers::WithinAbs(std::cosh(1.0), 1e-12));
    CHECK_THAT(m.c[1], Catch::Matchers::WithinAbs(std::sinh(1.0), 1e-12));
    CHECK_THAT(h_distance(p, m), Catch::Matchers::WithinAbs(1.0, 1e-12));
    CHECK_THAT(h_distance(m, q), Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("h_geodesic_point arclength postcondition on random pairs") {
    RandomStream rng(11);
    for (int k = 0; k < 50; ++k) {
        HPoint p = random_hpoint(rng), q = random_hpoint(rng);
        double t = rng.uniform();
        double d = h_distance(p, q);
        HPoint x = h_geodesic_point(p, q, t);
        CHECK_THAT(h_distance(p, x), Catch::Matchers::WithinAbs(t * d, 1e-10));
    }
}

TEST_CASE("h_angle trivial and collinear cases") {
    HPoint o(1, 0, 0);
    HPoint q(std::cosh(1.0), std::sinh(1.0), 0.0);
    HPoint r(std::cosh(1.0), -std::sinh(1.0), 0.0);
    CHECK(h_angle(o, q, q) < 1e-7);
    CHECK_THAT(h_angle(o, q, r), Catch::Matchers::WithinAbs(kPi, 1e-12));
    CHECK_THROWS_AS(h_angle(o, o, q), std::invalid_argument);
}

TEST_CASE("h_angle matches the hyperbolic law of cosines on random triples") {
    RandomStream rng(17);
    for (int k = 0; k < 100; ++k) {
        HPoint a = random_hpoint(rng), b = random_hpoint(rng), c = random_hpoint(rng);
        double ab = h_distance(a, b), ac = h_distance(a, c), bc = h_distance(b, c);
        if (ab < 1e-3 || ac < 1e-3) continue;
        double want = comparison_angle(-1, ab, ac, bc);
        CHECK_THAT(h_angle(a, b, c), Catch::Matchers::WithinAbs(want, 1e-9));
    }
}

// ---------------------------------------------------------------------------
// Triangle shapes, laws of cosines
// ---------------------------------------------------------------------------

TEST_CASE("triangle_angles: equilateral unit hyperbolic triangle") {
    TriangleAngles ang = triangle_angles(TriangleShape{-1, {1, 1, 1}});
    REQUIRE_FALSE(ang.flat);
    for (double a : ang.angles) CHECK_THAT(a, Catch::Matchers::WithinAbs(kEquilateralAngle, 1e-12));
}

TEST_CASE("triangle_angles: thin isoceles limit (a+eps, a+eps, eps)") {
    double eps = 1e-4;
    TriangleAngles ang = triangle_angles(TriangleShape{-1, {1 + eps, 1 + eps, eps}});
    // angle[i] is opposite side i: the two base angles are opposite the long sides.
    CHECK_THAT(ang.angles[0], Catch::Matchers::WithinAbs(kPi / 2, 0.01));
    CHECK_THAT(ang.angles[1], Catch::Matchers::WithinAbs(kPi / 2, 0.01));
    CHECK_THAT(ang.angles[2], Catch::Matchers::WithinAbs(0.0, 0.01));
}

TEST_CASE("triangle_angles: small equilateral approaches pi/3") {
    double eps = 1e-3;
    TriangleAngles ang = triangle_angles(TriangleShape{-1, {eps, eps, eps}});
    for (double a : ang.angles) CHECK_THAT(a, Catch::Matchers::WithinAbs(kPi / 3, 1e-5));
}

TEST_CASE("triangle_angles: flat shape gets the (pi, 0, 0) pattern") {
    TriangleAngles ang = triangle_angles(TriangleShape{-1, {2, 1, 1}});
    REQUIRE(ang.flat);
    CHECK(ang.angles[0] == kPi);  // opposite the longest side
    CHECK(ang.angles[1] == 0.0);
    CHECK(ang.angles[2] == 0.0);
}

TEST_CASE("comparison_angle reference values") {
    CHECK_THAT(comparison_angle(-1, 1, 1, 1), Catch::Matchers::WithinAbs(kEquilateralAngle, 1e-12));
    CHECK_THAT(comparison_angle(0, 3, 4, 5), Catch::Matchers::WithinAbs(kPi / 2, 1e-14));
    CHECK_THAT(comparison_angle(-1, 0.7, 0.7, 0.0), Catch::Matchers::WithinAbs(0.0, 1e-12));
    CHECK_THROWS_AS(comparison_angle(1, 3.0, 3.0, 1.0), std::invalid_argument);  // perimeter >= 2 pi
    CHECK_THROWS_AS(comparison_angle(-1, 0.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("TriangleShape validity") {
    CHECK(TriangleShape{-1, {1, 1, 1}}.valid());
    CHECK_FALSE(TriangleShape{-1, {3, 1, 1}}.valid());
    CHECK_FALSE(TriangleShape{1, {2.5, 2.5, 2.0}}.valid());  // spherical perimeter >= 2 pi
    CHECK_FALSE(TriangleShape{5, {1, 1, 1}}.valid());
    CHECK(TriangleShape{-1, {2, 1, 1}}.valid());  // flat but representable
}

TEST_CASE("embed_comparison_triangle round trip") {
    auto check_shape = [](const TriangleShape& s) {
        auto v = embed_comparison_triangle(s);
        CHECK_THAT(h_distance(v[0], v[1]), Catch::Matchers::WithinAbs(s.sides[0], 1e-10));
        CHECK_THAT(h_distance(v[0], v[2]), Catch::Matchers::WithinAbs(s.sides[1], 1e-10));
        CHECK_THAT(h_distance(v[1], v[2]), Catch::Matchers::WithinAbs(s.sides[2], 1e-10));
    };
    check_shape(TriangleShape{-1, {1, 1, 1}});
    RandomStream rng(23);
    for (int k = 0; k < 50; ++k) check_shape(random_hyperbolic_shape(rng));

    // (l, l, 0): last two vertices coincide.
    auto v = embed_comparison_triangle(TriangleShape{-1, {0.9, 0.9, 0.0}});
    CHECK_THAT(h_distance(v[0], v[1]), Catch::Matchers::WithinAbs(0.9, 1e-12));
    CHECK(h_distance(v[1], v[2]) < 1e-12);
}

TEST_CASE("embedded angles agree with triangle_angles") {
    RandomStream rng(29);
    for (int k = 0; k < 50; ++k) {
        TriangleShape s = random_hyperbolic_shape(rng);
        auto v = embed_comparison_triangle(s);
        TriangleAngles ang = triangle_angles(s);
        // Embed convention: sides (|v0 v1|, |v0 v2|, |v1 v2|) = (a, b, c);
        // angle at v0 is opposite c = angles[2], at v1 opposite b, at v2 opposite a.
        CHECK_THAT(h_angle(v[0], v[1], v[2]), Catch::Matchers::WithinAbs(ang.angles[2], 1e-9));
        CHECK_THAT(h_angle(v[1], v[0], v[2]), Catch::Matchers::WithinAbs(ang.angles[1], 1e-9));
        CHECK_THAT(h_angle(v[2], v[0], v[1]), Catch::Matchers::WithinAbs(ang.angles[0], 1e-9));
    }
}

TEST_CASE("embed_spherical_triangle round trip") {
    TriangleShape s{1, {0.5, 0.6, 0.7}};
    auto v = embed_spherical_triangle(s);
    CHECK_THAT(s_distance(v[0], v[1]), Catch::Matchers::WithinAbs(0.5, 1e-12));
    CHECK_THAT(s_distance(v[0], v[2]), Catch::Matchers::WithinAbs(0.6, 1e-12));
    CHECK_THAT(s_distance(v[1], v[2]), Catch::Matchers::WithinAbs(0.7, 1e-12));
}

// ---------------------------------------------------------------------------
// Sphere
// ---------------------------------------------------------------------------

TEST_CASE("spherical distance / geodesic / angle basics") {
    SPoint e1(1, 0, 0), e2(0, 1, 0), me1(-1, 0, 0);
    CHECK(s_distance(e1, e1) == 0.0);
    CHECK_THAT(s_distance(e1, e2), Catch::Matchers::WithinAbs(kPi / 2, 1e-14));
    CHECK_THAT(s_distance(e1, me1), Catch::Matchers::WithinAbs(kPi, 1e-14));
    CHECK_THROWS_AS(s_geodesic_point(e1, me1, 0.5), std::invalid_argument);
    SPoint m = s_geodesic_point(e1, e2, 0.5);
    CHECK_THAT(s_distance(e1, m), Catch::Matchers::WithinAbs(kPi / 4, 1e-12));
    CHECK_THAT(s_angle(SPoint(0, 0, 1), e1, e2), Catch::Matchers::WithinAbs(kPi / 2, 1e-12));
}

// ---------------------------------------------------------------------------
// Metric axioms / CAT(-1) internal checks
// ---------------------------------------------------------------------------

TEST_CASE("metric axioms on random hyperbolic samples") {
    RandomStream rng(31);
    for (int k = 0; k < 100; ++k) {
        HPoint a = random_hpoint(rng), b = random_hpoint(rng), c = random_hpoint(rng);
        CHECK(h_distance(a, b) == h_distance(b, a));
        CHECK(h_distance(a, b) + h_distance(b, c) >= h_distance(a, c) - 1e-12);
        CHECK(h_distance(a, a) <= 1e-12);
    }
}

TEST_CASE("H2 equals its own comparison space on side pairs") {
    RandomStream rng(37);
    for (int k = 0; k < 30; ++k) {
        HPoint a = random_hpoint(rng), b = random_hpoint(rng), c = random_hpoint(rng);
        TriangleShape s{-1, {h_distance(a, b), h_distance(a, c), h_distance(b, c)}};
        if (s.min_slack() < 1e-4) continue;
        auto v = embed_comparison_triangle(s);
        double t1 = rng.uniform(), t2 = rng.uniform();
        HPoint p = h_geodesic_point(a, b, t1), q = h_geodesic_point(a, c, t2);
        HPoint pc = h_geodesic_point(v[0], v[1], t1), qc = h_geodesic_point(v[0], v[2], t2);
        CHECK_THAT(h_distance(p, q), Catch::Matchers::WithinAbs(h_distance(pc, qc), 1e-10));
    }
}

TEST_CASE("Euclidean comparison angle is non-increasing as the rays shrink") {
    RandomStream rng(41);
    for (int k = 0; k < 20; ++k) {
        HPoint x = random_hpoint(rng), u = random_hpoint(rng), v = random_hpoint(rng);
        if (h_distance(x, u) < 0.2 || h_distance(x, v) < 0.2) continue;
        double prev = kPi + 1.0;
        for (double t : {1.0, 0.6, 0.3, 0.1, 0.03}) {
            HPoint ut = h_geodesic_point(x, u, t), vt = h_geodesic_point(x, v, t);
            double a = h_distance(x, ut), b = h_distance(x, vt), c = h_distance(ut, vt);
            if (a < 1e-9 || b < 1e-9) break;
            double ang = comparison_angle(0, a, b, c);
            CHECK(ang <= prev + 1e-9);
            prev = ang;
        }
    }
}

// ---------------------------------------------------------------------------
// Isometries
// ---------------------------------------------------------------------------

TEST_CASE("from_sl2 produces valid isometries; apply preserves distances") {
    RandomStream rng(43);
    for (int k = 0; k < 30; ++k) {
        double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2), c = rng.uniform(-2, 2);
        double d = (1.0 + b * c) / (std::abs(a) > 0.1 ? a : 1.0);
        if (std::abs(a) <= 0.1) a = 1.0;
        HIsometry g = HIsometry::from_sl2(a, b, c, d);
        CHECK(g.is_valid());
        HPoint p = random_hpoint(rng), q = random_hpoint(rng);
        CHECK_THAT(h_distance(g.apply(p), g.apply(q)),
                   Catch::Matchers::WithinAbs(h_distance(p, q), 1e-10));
        // inverse . compose = identity on points
        HIsometry gi = g.inverse();
        CHECK(h_distance(gi.apply(g.apply(p)), p) < 1e-10);
        CHECK(g.compose(gi).form_violation() < 1e-10);
    }
    CHECK_THROWS_AS(HIsometry::from_sl2(1, 1, 1, 1), std::invalid_argument);  // det 0
}

TEST_CASE("h_recenter_isometry maps p to the origin") {
    RandomStream rng(47);
    for (int k = 0; k < 30; ++k) {
        HPoint p = random_hpoint(rng, 3.0);
        HIsometry g = h_recenter_isometry(p);
        CHECK(h_distance(g.apply(p), HPoint(1, 0, 0)) < 1e-12);
        CHECK(g.has_sl2);
    }
}

TEST_CASE("h_isometry_from_segments maps segment to segment") {
    RandomStream rng(53);
    for (int k = 0; k < 30; ++k) {
        HPoint p = random_hpoint(rng), q = random_hpoint(rng);
        if (h_distance(p, q) < 1e-3) continue;
        // Build a congruent target segment by an arbitrary isometry.
        HIsometry move = HIsometry::from_sl2(std::cosh(0.3), std::sinh(0.3), std::sinh(0.3), std::cosh(0.3))
                             .compose(h_recenter_isometry(random_hpoint(rng)));
        HPoint p2 = move.apply(p), q2 = move.apply(q);
        HIsometry g = h_isometry_from_segments(p, q, p2, q2);
        CHECK(h_distance(g.apply(p), p2) < 1e-10);
        CHECK(h_distance(g.apply(q), q2) < 1e-10);
    }
}

TEST_CASE("HPoint constructor rejects spacelike and lower-sheet vectors") {
    CHECK_THROWS_AS(HPoint(0.5, 1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(HPoint(-1.0, 0.0, 0.0), std::invalid_argument);
}
