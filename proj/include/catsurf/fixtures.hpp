#pragma once

// Canonical fixture configurations: representations of the genus-2 surface
// group into H2 (hyperboloid model, images given as SL(2,R) matrices) and
// into the rank-2 metric tree.

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "target_space.hpp"

namespace catsurf {

struct Sl2 {
    double a, b, c, d;
};

struct FixtureData {
    std::string name;
    int genus = 2;
    TargetKind target = TargetKind::H2;
    std::vector<Sl2> matrices;       // H2 fixtures
    int tree_rank = 0;               // tree fixtures
    std::vector<double> tree_edge_lengths;
    std::vector<std::string> words;
};

inline std::vector<std::string> fixture_names() {
    return {"fuchsian_octagon_g2", "tree_overlapping_axes", "trivial_rep",
            "elliptic_rotations", "hyperbolic_cyclic_divergent", "mixed_elliptic_hyperbolic"};
}

namespace detail {

inline Sl2 mul(const Sl2& x, const Sl2& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}
inline Sl2 inv(const Sl2& x) { return {x.d, -x.b, -x.c, x.a}; }
inline Sl2 conj(const Sl2& g, const Sl2& x) { return mul(mul(g, x), inv(g)); }
inline Sl2 rotation(double theta) {
    double c = std::cos(theta / 2), s = std::sin(theta / 2);
    return {c, s, -s, c};
}
inline Sl2 translation(double len) {
    double e = std::exp(len / 2);
    return {e, 0.0, 0.0, 1.0 / e};
}

}  // namespace detail

inline FixtureData make_fixture(const std::string& name) {
    FixtureData fx;
    fx.name = name;
    fx.genus = 2;
    if (name == "fuchsian_octagon_g2") {
        // Side-pairing generators of the regular hyperbolic octagon with all
        // vertex angles pi/4 (side s from cosh(s/2) = cot(pi/8)); the
        // commutator relator is the octagon boundary word.
        fx.matrices = {
            {-0.32299674906988809, 10.022423819326228, -0.22021686779305681, 3.7372103114429831},
            {-3.7372103114429831, 29.48148502035178, -0.074864165752265481, 0.32299674906988809},
            {3.7372103114429831, 29.48148502035178, -0.074864165752265481, -0.32299674906988809},
            {0.32299674906988809, 10.022423819326228, -0.22021686779305681, -3.7372103114429831}};
    } else if (name == "trivial_rep") {
        fx.matrices = {{1, 0, 0, 1}, {1, 0, 0, 1}, {1, 0, 0, 1}, {1, 0, 0, 1}};
    } else if (name == "elliptic_rotations") {
        // a1, b1 rotate about i; a2, b2 rotate about the point at distance 1
        // along the imaginary axis.  Same-fixed-point pairs commute, so the
        // genus-2 relator holds exactly.
        Sl2 s = detail::translation(1.0);
        fx.matrices = {detail::rotation(0.8), detail::rotation(1.3),
                       detail::conj(s, detail::rotation(0.5)), detail::conj(s, detail::rotation(2.0))};
    } else if (name == "hyperbolic_cyclic_divergent") {
        // Two hyperbolic translations sharing exactly one ideal fixed point:
        // the relator holds (b1, b2 trivial) but the energy infimum is not
        // attained, so the solver drifts toward the shared boundary point.
        Sl2 a = detail::translation(1.0);
        Sl2 t{1, 1, 0, 1};
        fx.matrices = {a, {1, 0, 0, 1}, detail::conj(t, a), {1, 0, 0, 1}};
    } else if (name == "mixed_elliptic_hyperbolic") {
        // a1, b1 rotate about i; a2, b2 translate along the common axis
        // through K.i, so each handle pair commutes and the relator is exact.
        double r = 1.0 / std::sqrt(2.0);
        Sl2 k{r, -r, r, r};
        fx.matrices = {detail::rotation(0.9), detail::rotation(1.7),
                       detail::conj(k, detail::translation(0.6)), detail::conj(k, detail::translation(0.9))};
    } else if (name == "tree_overlapping_axes") {
        fx.target = TargetKind::Tree;
        fx.tree_rank = 2;
        fx.tree_edge_lengths = {1.0, 1.0};
        fx.words = {"ab", "", "aB", ""};
    } else {
        throw std::invalid_argument("make_fixture: unknown fixture name '" + name + "'");
    }
    return fx;
}

inline Representation representation_from_fixture(const FixtureData& fx) {
    Representation rep;
    rep.genus = fx.genus;
    if (fx.target == TargetKind::H2) {
        rep.target = TargetSpace::h2();
        for (const auto& m : fx.matrices)
            rep.images.push_back(TargetIsometry::h2(HIsometry::from_sl2(m.a, m.b, m.c, m.d)));
    } else {
        TreeSpace tree(fx.tree_rank, fx.tree_edge_lengths);
        rep.target = TargetSpace::make_tree(tree);
        for (const auto& w : fx.words) rep.images.push_back(TargetIsometry::tree(parse_word(w)));
    }
    return rep;
}

}  // namespace catsurf
