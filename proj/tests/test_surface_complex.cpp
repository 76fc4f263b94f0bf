#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "catsurf/fixtures.hpp"
#include "catsurf/surface_complex.hpp"
#include "test_support.hpp"

using namespace catsurf;
using namespace testsupport;

TEST_CASE("riemann_triangulation counts: genus 2 and 3") {
    GainTriangulation t2 = riemann_triangulation(2);
    CHECK(t2.num_vertices == 1);
    CHECK(t2.num_undirected() == 9);
    CHECK(t2.num_faces() == 6);
    CHECK(validate(t2).ok());

    GainTriangulation t3 = riemann_triangulation(3);
    CHECK(t3.num_vertices == 1);
    CHECK(t3.num_undirected() == 15);
    CHECK(t3.num_faces() == 10);
    CHECK(validate(t3).ok());

    CHECK_THROWS_AS(riemann_triangulation(1), std::invalid_argument);
}

TEST_CASE("boundary gain word reduces to the relator") {
    CHECK(boundary_gain_word(2) == surface_group_relator(2));
    CHECK(boundary_gain_word(3) == surface_group_relator(3));
}

TEST_CASE("validate flags broken triangulations") {
    // Broken partner gain.
    GainTriangulation t = riemann_triangulation(2);
    t.edges[1].gain = Word{1};
    CHECK_FALSE(validate(t).ok());

    // Using a directed edge twice (and its partner never) breaks the face
    // pairing; with a single vertex every tail-to-head check is vacuous, so
    // the usage count is the meaningful invariant.
    GainTriangulation t2 = riemann_triangulation(2);
    t2.faces[0][0] = GainTriangulation::partner(t2.faces[0][0]);
    CHECK_FALSE(validate(t2).ok());

    // Endpoint out of range.
    GainTriangulation t3 = riemann_triangulation(2);
    t3.edges[0].tail = 5;
    CHECK_FALSE(validate(t3).ok());

    // Euler characteristic mismatch: drop a face.
    GainTriangulation t4 = riemann_triangulation(2);
    t4.faces.pop_back();
    CHECK_FALSE(validate(t4).ok());
}

TEST_CASE("length_function_from_map: constant map under the trivial representation") {
    GainTriangulation t = riemann_triangulation(2);
    Representation rep = representation_from_fixture(make_fixture("trivial_rep"));
    EquivariantMap f;
    f.images = {TargetPoint::h2(HPoint(std::cosh(0.7), std::sinh(0.7), 0))};
    LengthFunction l = length_function_from_map(t, rep, f);
    for (double len : l.lengths) CHECK(len < 1e-12);
}

TEST_CASE("length_function_from_map: loop edges measure d(p, rho(gamma) p)") {
    GainTriangulation t = riemann_triangulation(2);
    Representation rep = representation_from_fixture(make_fixture("fuchsian_octagon_g2"));
    EquivariantMap f;
    HPoint p(std::cosh(0.4), 0, std::sinh(0.4));
    f.images = {TargetPoint::h2(p)};
    LengthFunction l = length_function_from_map(t, rep, f);
    for (int u = 0; u < t.num_undirected(); ++u) {
        int e = GainTriangulation::forward(u);
        TargetIsometry g = evaluate_word(rep, t.edges[e].gain);
        CHECK_THAT(l.lengths[u], Catch::Matchers::WithinAbs(h_distance(p, g.h.apply(p)), 1e-12));
    }
}

TEST_CASE("length function at the octagon corner point hits the frozen geometry") {
    // The single vertex mapped to a corner of the regular octagon gives edge
    // lengths: four loop edges = side, four crown diagonals, one main diagonal.
    GainTriangulation t = riemann_triangulation(2);
    Representation rep = representation_from_fixture(make_fixture("fuchsian_octagon_g2"));
    EquivariantMap f;
    f.images = {TargetPoint::h2(HPoint(std::cosh(kOctagonRadius), std::sinh(kOctagonRadius), 0))};
    LengthFunction l = length_function_from_map(t, rep, f);
    REQUIRE(l.lengths.size() == 9u);
    for (int u = 0; u < 4; ++u)
        CHECK_THAT(l.lengths[u], Catch::Matchers::WithinAbs(kOctagonSide, 1e-10));
    for (int u = 4; u < 8; ++u)
        CHECK_THAT(l.lengths[u], Catch::Matchers::WithinAbs(kOctagonCrownDiagonal, 1e-10));
    CHECK_THAT(l.lengths[8], Catch::Matchers::WithinAbs(kOctagonMainDiagonal, 1e-10));
}

TEST_CASE("length function is invariant under conjugating the representation") {
    // Post-composing the map with an isometry g0 while conjugating the
    // representation by g0 is the same surface datum; lengths must not move.
    GainTriangulation t = riemann_triangulation(2);
    Representation rep = representation_from_fixture(make_fixture("fuchsian_octagon_g2"));
    EquivariantMap f;
    f.images = {TargetPoint::h2(HPoint(std::cosh(0.9), 0.3, std::sinh(0.4)))};
    LengthFunction l1 = length_function_from_map(t, rep, f);

    TargetIsometry g0 = evaluate_word(rep, parse_word("abA"));
    Representation rep2 = rep;
    for (auto& im : rep2.images) im = g0.compose(im).compose(g0.inverse());
    EquivariantMap g;
    g.images = {rep.target.apply(g0, f.images[0])};
    LengthFunction l2 = length_function_from_map(t, rep2, g);
    for (int u = 0; u < t.num_undirected(); ++u)
        CHECK_THAT(l2.lengths[u], Catch::Matchers::WithinAbs(l1.lengths[u], 1e-9));
}

TEST_CASE("flatten_report classifications") {
    GainTriangulation t = riemann_triangulation(2);

    LengthFunction zero;
    zero.lengths.assign(9, 0.0);
    FlattenReport rz = flatten_report(t, zero);
    CHECK(rz.flat_edges.size() == 9u);
    CHECK(rz.flat_faces.size() == 6u);

    LengthFunction generic;
    generic.lengths.assign(9, 1.0);
    FlattenReport rg = flatten_report(t, generic);
    CHECK_FALSE(rg.any());

    // One edge of length zero: only its incident faces become flat (a, a, 0).
    LengthFunction one_zero;
    one_zero.lengths.assign(9, 1.0);
    one_zero.lengths[8] = 0.0;  // main diagonal, shared by the two core faces
    FlattenReport r1 = flatten_report(t, one_zero);
    CHECK(r1.flat_edges == std::vector<int>{8});
    CHECK(r1.flat_faces.size() == 2u);

    // Triangle inequality violation is an error, not a flat face.
    LengthFunction bad;
    bad.lengths.assign(9, 1.0);
    bad.lengths[8] = 5.0;
    CHECK_THROWS_AS(flatten_report(t, bad), std::invalid_argument);
    LengthFunction neg;
    neg.lengths.assign(9, 1.0);
    neg.lengths[0] = -0.5;
    CHECK_THROWS_AS(flatten_report(t, neg), std::invalid_argument);
}

TEST_CASE("vertex link of the one-vertex triangulation is a single 18-cycle") {
    GainTriangulation t = riemann_triangulation(2);
    std::vector<int> cycle = vertex_link(t, 0);
    // 6 faces x 3 corners = 18 corners around the unique vertex.
    CHECK(cycle.size() == 18u);
    // Every directed edge appears exactly once as an out-edge.
    std::vector<int> seen(t.num_directed(), 0);
    for (int e : cycle) {
        REQUIRE(e >= 0);
        REQUIRE(e < t.num_directed());
        CHECK(t.edges[e].tail == 0);
        ++seen[e];
    }
    for (int e = 0; e < t.num_directed(); ++e) CHECK(seen[e] == 1);
}

TEST_CASE("LiftContext face images realize the face side lengths") {
    GainTriangulation t = riemann_triangulation(2);
    Representation rep = representation_from_fixture(make_fixture("fuchsian_octagon_g2"));
    EquivariantMap f;
    f.images = {TargetPoint::h2(HPoint(std::cosh(kOctagonRadius), std::sinh(kOctagonRadius), 0))};
    LengthFunction l = length_function_from_map(t, rep, f);
    LiftContext ctx(t, rep);
    for (int fi = 0; fi < t.num_faces(); ++fi) {
        auto v = ctx.face_images(f, fi);
        auto s = face_side_lengths(t, l, fi);
        CHECK_THAT(rep.target.distance(v[0], v[1]), Catch::Matchers::WithinAbs(s[0], 1e-10));
        CHECK_THAT(rep.target.distance(v[1], v[2]), Catch::Matchers::WithinAbs(s[1], 1e-10));
        CHECK_THAT(rep.target.distance(v[2], v[0]), Catch::Matchers::WithinAbs(s[2], 1e-10));
    }
}
