#pragma once

// Pluggable CAT(-1) target X with two concrete implementations: the
// hyperbolic plane (hyperboloid model) and a regular metric tree realized as
// the Cayley graph of a free group with per-generator edge lengths.
// Also houses validated representations rho: Gamma -> Isom(X).

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "model_geometry.hpp"
#include "words.hpp"

namespace catsurf {

// ---------------------------------------------------------------------------
// Tree target
// ---------------------------------------------------------------------------

struct TreeSpace {
    int rank = 2;
    std::vector<double> edge_lengths;  // indexed by generator-1

    TreeSpace() : edge_lengths{1.0, 1.0} {}
    TreeSpace(int r, std::vector<double> lens) : rank(r), edge_lengths(std::move(lens)) {
        if (rank < 1) throw std::invalid_argument("TreeSpace: rank must be >= 1");
        if (static_cast<int>(edge_lengths.size()) != rank)
            throw std::invalid_argument("TreeSpace: need one edge length per generator");
        for (double l : edge_lengths)
            if (!(l > 0.0)) throw std::invalid_argument("TreeSpace: edge lengths must be positive");
    }
    static TreeSpace unit(int r) { return TreeSpace(r, std::vector<double>(r, 1.0)); }

    double length(int gen) const {
        int k = std::abs(gen);
        if (k < 1 || k > rank) throw std::invalid_argument("TreeSpace: generator out of range");
        return edge_lengths[k - 1];
    }
};

// Point of the tree: a vertex (dir == 0) or an interior point of the edge
// from `base` to `base * dir` at distance `offset` from `base`.  The
// canonical form has dir > 0 and offset strictly inside (0, length).
struct TreePoint {
    Word base;
    int dir = 0;
    double offset = 0.0;

    TreePoint() = default;
    TreePoint(const TreeSpace& tree, Word b, int d, double off) : base(std::move(b)), dir(d), offset(off) {
        canonicalize(tree);
    }

    bool is_vertex() const { return dir == 0; }

    void canonicalize(const TreeSpace& tree) {
        base = reduce_word(base);
        if (dir == 0) {
            if (offset != 0.0) throw std::invalid_argument("TreePoint: vertex with nonzero offset");
            return;
        }
        double len = tree.length(dir);
        if (offset < -1e-12 || offset > len + 1e-12)
            throw std::invalid_argument("TreePoint: offset outside the edge");
        offset = clamp(offset, 0.0, len);
        const double snap = 1e-12 * std::max(1.0, len);
        if (offset <= snap) {
            dir = 0;
            offset = 0.0;
            return;
        }
        if (offset >= len - snap) {
            push_reduced(base, dir);
            dir = 0;
            offset = 0.0;
            return;
        }
        if (dir < 0) {  // re-anchor at the other endpoint so dir > 0
            push_reduced(base, dir);
            dir = -dir;
            offset = len - offset;
        }
    }
};

// Distance between tree vertices u, v: weighted length of reduce(u^-1 v).
inline double tree_vertex_distance(const TreeSpace& tree, const Word& u, const Word& v) {
    Word w = concat_words(inverse_word(u), v);
    double d = 0.0;
    for (int x : w) d += tree.length(x);
    return d;
}

namespace detail {

// Anchor decomposition of a tree point: one or two (vertex, distance) pairs.
struct TreeAnchors {
    Word v[2];
    double d[2];
    int n = 0;
};

inline TreeAnchors tree_anchors(const TreeSpace& tree, const TreePoint& p) {
    TreeAnchors a;
    if (p.is_vertex()) {
        a.v[0] = p.base;
        a.d[0] = 0.0;
        a.n = 1;
    } else {
        a.v[0] = p.base;
        a.d[0] = p.offset;
        a.v[1] = concat_words(p.base, Word{p.dir});
        a.d[1] = tree.length(p.dir) - p.offset;
        a.n = 2;
    }
    return a;
}

inline bool same_edge(const TreePoint& p, const TreePoint& q) {
    return !p.is_vertex() && !q.is_vertex() && p.dir == q.dir && p.base == q.base;
}

}  // namespace detail

inline double tree_distance(const TreeSpace& tree, const TreePoint& p, const TreePoint& q) {
    if (detail::same_edge(p, q)) return std::abs(p.offset - q.offset);
    auto ap = detail::tree_anchors(tree, p);
    auto aq = detail::tree_anchors(tree, q);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < ap.n; ++i)
        for (int j = 0; j < aq.n; ++j) {
            double d = ap.d[i] + tree_vertex_distance(tree, ap.v[i], aq.v[j]) + aq.d[j];
            best = std::min(best, d);
        }
    return best;
}

// Point at arclength s from p on the geodesic [p, q].
inline TreePoint tree_geodesic_at_arclength(const TreeSpace& tree, const TreePoint& p, const TreePoint& q, double s) {
    double total = tree_distance(tree, p, q);
    s = clamp(s, 0.0, total);
    if (total <= 0.0) return p;
    if (detail::same_edge(p, q)) {
        double off = p.offset + (q.offset > p.offset ? s : -s);
        return TreePoint(tree, p.base, p.dir, off);
    }
    // Choose the minimizing exit/entry anchor combination.
    auto ap = detail::tree_anchors(tree, p);
    auto aq = detail::tree_anchors(tree, q);
    int bi = 0, bj = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < ap.n; ++i)
        for (int j = 0; j < aq.n; ++j) {
            double d = ap.d[i] + tree_vertex_distance(tree, ap.v[i], aq.v[j]) + aq.d[j];
            if (d < best - 1e-15) {
                best = d;
                bi = i;
                bj = j;
            }
        }
    const Word& x = ap.v[bi];
    const Word& y = aq.v[bj];
    // Leg 1: along p's edge toward anchor x.
    if (!p.is_vertex()) {
        double leg = ap.d[bi];
        if (s <= leg) {
            double off = p.offset + (bi == 1 ? s : -s);
            return TreePoint(tree, p.base, p.dir, off);
        }
        s -= leg;
    }
    // Leg 2: vertex path from x to y along reduce(x^-1 y).
    Word path = concat_words(inverse_word(x), y);
    Word cur = x;
    for (int letter : path) {
        double len = tree.length(letter);
        if (s <= len) return TreePoint(tree, cur, letter, s);
        s -= len;
        push_reduced(cur, letter);
    }
    // Leg 3: into q's edge from anchor y.
    if (!q.is_vertex()) {
        double len = tree.length(q.dir);
        double off = (bj == 0) ? s : len - s;
        return TreePoint(tree, q.base, q.dir, off);
    }
    return TreePoint(tree, cur, 0, 0.0);
}

inline double tree_smallest(const TreeSpace& tree) {
    double m = tree.edge_lengths[0];
    for (double l : tree.edge_lengths) m = std::min(m, l);
    return m;
}

// Germ of the geodesic [apex, z] at apex.
//  - apex interior point: returns +1 (toward base*dir) or -1 (toward base)
//  - apex vertex: returns the signed generator of the first edge.
inline int tree_germ(const TreeSpace& tree, const TreePoint& apex, const TreePoint& z) {
    double d = tree_distance(tree, apex, z);
    if (d <= 0.0) throw std::invalid_argument("tree_germ: undefined direction (coincident points)");
    if (apex.is_vertex()) {
        TreePoint step = tree_geodesic_at_arclength(tree, apex, z, std::min(d, 0.5 * tree_smallest(tree)));
        // Recover the first edge: step lies on an edge incident to apex.
        if (!step.is_vertex()) {
            if (step.base == apex.base) return step.dir;
            return -step.dir;  // step.base * step.dir == apex.base
        }
        // Degenerate: step landed on a vertex; derive germ from the word path.
        Word path = concat_words(inverse_word(apex.base), step.base);
        if (path.empty()) throw std::logic_error("tree_germ: empty step");
        return path.front();
    }
    if (detail::same_edge(apex, z)) return (z.offset > apex.offset) ? +1 : -1;
    auto aa = detail::tree_anchors(tree, apex);
    auto az = detail::tree_anchors(tree, z);
    double via[2];
    for (int i = 0; i < 2; ++i) {
        via[i] = std::numeric_limits<double>::infinity();
        for (int j = 0; j < az.n; ++j)
            via[i] = std::min(via[i], aa.d[i] + tree_vertex_distance(tree, aa.v[i], az.v[j]) + az.d[j]);
    }
    return (via[1] < via[0]) ? +1 : -1;
}

// ---------------------------------------------------------------------------
// Tagged target point / isometry
// ---------------------------------------------------------------------------

enum class TargetKind { H2, Tree };

struct TargetPoint {
    TargetKind kind = TargetKind::H2;
    HPoint h;
    TreePoint t;

    TargetPoint() = default;
    static TargetPoint h2(const HPoint& p) {
        TargetPoint r;
        r.kind = TargetKind::H2;
        r.h = p;
        return r;
    }
    static TargetPoint tree(const TreePoint& p) {
        TargetPoint r;
        r.kind = TargetKind::Tree;
        r.t = p;
        return r;
    }
};

struct TargetIsometry {
    TargetKind kind = TargetKind::H2;
    HIsometry h = HIsometry::identity();
    Word w;  // tree: left multiplication by a reduced word

    static TargetIsometry h2(const HIsometry& m) {
        TargetIsometry r;
        r.kind = TargetKind::H2;
        r.h = m;
        return r;
    }
    static TargetIsometry tree(const Word& word) {
        TargetIsometry r;
        r.kind = TargetKind::Tree;
        r.w = reduce_word(word);
        return r;
    }
    static TargetIsometry identity(TargetKind k) {
        TargetIsometry r;
        r.kind = k;
        return r;
    }

    TargetIsometry compose(const TargetIsometry& o) const {
        if (kind != o.kind) throw std::invalid_argument("TargetIsometry: mixed targets");
        TargetIsometry r;
        r.kind = kind;
        if (kind == TargetKind::H2)
            r.h = h.compose(o.h);
        else
            r.w = concat_words(w, o.w);
        return r;
    }
    TargetIsometry inverse() const {
        TargetIsometry r;
        r.kind = kind;
        if (kind == TargetKind::H2)
            r.h = h.inverse();
        else
            r.w = inverse_word(w);
        return r;
    }
};

// ---------------------------------------------------------------------------
// The target space facade
// ---------------------------------------------------------------------------

struct TargetSpace {
    TargetKind kind = TargetKind::H2;
    TreeSpace tree;  // meaningful for Tree only

    static TargetSpace h2() { return TargetSpace{}; }
    static TargetSpace make_tree(const TreeSpace& t) {
        TargetSpace s;
        s.kind = TargetKind::Tree;
        s.tree = t;
        return s;
    }

    void check(const TargetPoint& p) const {
        if (p.kind != kind) throw std::invalid_argument("TargetSpace: mixed targets");
    }

    TargetPoint basepoint() const {
        if (kind == TargetKind::H2) return TargetPoint::h2(HPoint(1, 0, 0));
        return TargetPoint::tree(TreePoint{});
    }

    double distance(const TargetPoint& p, const TargetPoint& q) const {
        check(p);
        check(q);
        if (kind == TargetKind::H2) return h_distance(p.h, q.h);
        return tree_distance(tree, p.t, q.t);
    }

    TargetPoint geodesic_point(const TargetPoint& p, const TargetPoint& q, double t) const {
        check(p);
        check(q);
        if (kind == TargetKind::H2) return TargetPoint::h2(h_geodesic_point(p.h, q.h, t));
        return TargetPoint::tree(tree_geodesic_at_arclength(tree, p.t, q.t, t * tree_distance(tree, p.t, q.t)));
    }

    double angle(const TargetPoint& apex, const TargetPoint& u, const TargetPoint& v) const {
        check(apex);
        check(u);
        check(v);
        if (kind == TargetKind::H2) return h_angle(apex.h, u.h, v.h);
        int gu = tree_germ(tree, apex.t, u.t);
        int gv = tree_germ(tree, apex.t, v.t);
        return (gu == gv) ? 0.0 : kPi;
    }

    TargetPoint apply(const TargetIsometry& g, const TargetPoint& p) const {
        check(p);
        if (g.kind != kind) throw std::invalid_argument("TargetSpace: mixed targets");
        if (kind == TargetKind::H2) return TargetPoint::h2(g.h.apply(p.h));
        TreePoint q = p.t;
        q.base = concat_words(g.w, q.base);
        return TargetPoint::tree(q);
    }
};

// ---------------------------------------------------------------------------
// H^2 isometry classification (trace / axis data)
// ---------------------------------------------------------------------------

enum class HIsoType { Identity, Elliptic, Parabolic, Hyperbolic };

struct HIsoClass {
    HIsoType type = HIsoType::Identity;
    double translation_length = 0.0;
    HPoint witness;           // axis point (hyperbolic) or fixed point (elliptic)
    Vec3 axis_attracting{};   // null eigenvector (hyperbolic only)
    Vec3 axis_repelling{};
};

namespace detail {

// Null vector of a singular 3x3 matrix, via the largest cross product of rows.
inline Vec3 nullspace_vector(const Mat3& a) {
    Vec3 r0{a(0, 0), a(0, 1), a(0, 2)};
    Vec3 r1{a(1, 0), a(1, 1), a(1, 2)};
    Vec3 r2{a(2, 0), a(2, 1), a(2, 2)};
    Vec3 c01 = ecross(r0, r1), c12 = ecross(r1, r2), c20 = ecross(r2, r0);
    Vec3 best = c01;
    if (enorm(c12) > enorm(best)) best = c12;
    if (enorm(c20) > enorm(best)) best = c20;
    double n = enorm(best);
    if (n <= 0.0) throw std::runtime_error("nullspace_vector: rank deficiency > 1");
    return (1.0 / n) * best;
}

}  // namespace detail

inline HIsoClass h_classify(const HIsometry& g, double tol = 1e-9) {
    HIsoClass out;
    double tr = g.m(0, 0) + g.m(1, 1) + g.m(2, 2);
    double id_err = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) id_err = std::max(id_err, std::abs(g.m(i, j) - (i == j ? 1.0 : 0.0)));
    if (id_err <= tol) {
        out.type = HIsoType::Identity;
        return out;
    }
    if (tr > 3.0 + tol) {
        out.type = HIsoType::Hyperbolic;
        double coshl = (tr - 1.0) / 2.0;
        out.translation_length = std::acosh(std::max(1.0, coshl));
        double lam = std::exp(out.translation_length);
        auto shifted = [&](double eigenvalue) {
            Mat3 a = g.m;
            for (int i = 0; i < 3; ++i) a(i, i) -= eigenvalue;
            return detail::nullspace_vector(a);
        };
        Vec3 np = shifted(lam);
        Vec3 nm = shifted(1.0 / lam);
        // Orient both null vectors to the upper cone.
        if (np[0] < 0) np = -1.0 * np;
        if (nm[0] < 0) nm = -1.0 * nm;
        out.axis_attracting = np;
        out.axis_repelling = nm;
        double s = mdot(np, nm);  // > 0 for distinct upper-cone null rays
        Vec3 mid = (1.0 / std::sqrt(2.0 * s)) * (np + nm);
        out.witness = HPoint(mid);
        return out;
    }
    if (tr >= 3.0 - tol) {
        out.type = HIsoType::Parabolic;
        return out;
    }
    out.type = HIsoType::Elliptic;
    Mat3 a = g.m;
    for (int i = 0; i < 3; ++i) a(i, i) -= 1.0;
    Vec3 fix = detail::nullspace_vector(a);
    if (fix[0] < 0) fix = -1.0 * fix;
    out.witness = HPoint(fix);
    return out;
}

// ---------------------------------------------------------------------------
// Representations
// ---------------------------------------------------------------------------

struct Representation {
    TargetSpace target;
    int genus = 2;
    std::vector<TargetIsometry> images;  // one per generator a1,b1,...,ag,bg

    int num_generators() const { return 2 * genus; }

    const TargetIsometry& image(int gen) const {
        int k = std::abs(gen);
        if (k < 1 || k > num_generators()) throw std::invalid_argument("Representation: generator out of range");
        return images[k - 1];
    }
};

inline TargetIsometry evaluate_word(const Representation& rep, const Word& w) {
    TargetIsometry g = TargetIsometry::identity(rep.target.kind);
    for (int x : w) {
        const TargetIsometry& im = rep.image(x);
        g = g.compose(x > 0 ? im : im.inverse());
    }
    return g;
}

inline Word surface_group_relator(int genus) {
    Word w;
    for (int k = 0; k < genus; ++k) {
        int a = 2 * k + 1, b = 2 * k + 2;
        for (int x : {a, b, -a, -b}) push_reduced(w, x);
    }
    return w;
}

struct RelatorCheck {
    bool pass = false;
    double max_probe_displacement = 0.0;
    double matrix_identity_error = 0.0;  // H2 only
};

// Relator invariant: the image of [a1,b1]...[ag,bg] moves each of 5 probe
// points by < 1e-8; for H2 the Minkowski matrix must also be within 1e-8 of
// the identity (the adjoint representation identifies +-A in SL(2,R)).
inline RelatorCheck relator_check(const Representation& rep, double tol = 1e-8) {
    RelatorCheck out;
    TargetIsometry g = evaluate_word(rep, surface_group_relator(rep.genus));
    std::vector<TargetPoint> probes;
    if (rep.target.kind == TargetKind::H2) {
        probes.push_back(TargetPoint::h2(HPoint(1, 0, 0)));
        probes.push_back(TargetPoint::h2(HPoint(std::cosh(0.5), std::sinh(0.5), 0)));
        probes.push_back(TargetPoint::h2(HPoint(std::cosh(0.5), 0, std::sinh(0.5))));
        probes.push_back(TargetPoint::h2(HPoint(std::cosh(1.0), -std::sinh(1.0), 0)));
        probes.push_back(TargetPoint::h2(HPoint(std::cosh(1.0), 0, -std::sinh(1.0))));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                out.matrix_identity_error =
                    std::max(out.matrix_identity_error, std::abs(g.h.m(i, j) - (i == j ? 1.0 : 0.0)));
    } else {
        const TreeSpace& tr = rep.target.tree;
        probes.push_back(TargetPoint::tree(TreePoint{}));
        probes.push_back(TargetPoint::tree(TreePoint(tr, Word{1}, 0, 0)));
        probes.push_back(TargetPoint::tree(TreePoint(tr, Word{-1}, 0, 0)));
        probes.push_back(TargetPoint::tree(TreePoint(tr, Word{1, std::min(2, tr.rank)}, 0, 0)));
        probes.push_back(TargetPoint::tree(TreePoint(tr, Word{std::min(2, tr.rank)}, 0, 0)));
    }
    for (const auto& p : probes)
        out.max_probe_displacement = std::max(out.max_probe_displacement, rep.target.distance(p, rep.target.apply(g, p)));
    out.pass = out.max_probe_displacement < tol;
    if (rep.target.kind == TargetKind::H2) out.pass = out.pass && out.matrix_identity_error < tol;
    if (rep.target.kind == TargetKind::Tree) out.pass = out.pass && g.w.empty();
    return out;
}

// ---------------------------------------------------------------------------
// Translation length / axis sampling
// ---------------------------------------------------------------------------

struct AxisSample {
    double translation_length = 0.0;
    TargetPoint witness;
    bool elliptic = false;  // min displacement 0 with a fixed point
};

inline AxisSample translation_axis_sample(const TargetSpace& space, const TargetIsometry& g,
                                          const TargetPoint& probe, int steps = 256) {
    AxisSample out;
    if (space.kind == TargetKind::H2) {
        HIsoClass cls = h_classify(g.h);
        out.translation_length = cls.translation_length;
        if (cls.type == HIsoType::Hyperbolic || cls.type == HIsoType::Elliptic) {
            out.witness = TargetPoint::h2(cls.witness);
            out.elliptic = (cls.type == HIsoType::Elliptic);
        } else {
            out.witness = probe;  // identity everywhere-minimal; parabolic: infimum 0 not attained
            out.elliptic = (cls.type == HIsoType::Identity);
        }
        return out;
    }
    // Tree: steepest-descent walk over vertices (displacement is minimized on
    // the axis, which passes through vertices for left multiplications).
    if (g.w.empty()) {
        out.translation_length = 0.0;
        out.witness = probe;
        out.elliptic = true;
        return out;
    }
    const TreeSpace& tr = space.tree;
    Word v = probe.kind == TargetKind::Tree && probe.t.is_vertex() ? probe.t.base : Word{};
    auto disp = [&](const Word& u) {
        return tree_vertex_distance(tr, u, concat_words(g.w, u));
    };
    double cur = disp(v);
    for (int it = 0; it < steps; ++it) {
        bool moved = false;
        for (int k = 1; k <= tr.rank && !moved; ++k) {
            for (int s : {k, -k}) {
                Word u = v;
                push_reduced(u, s);
                double d = disp(u);
                if (d < cur - 1e-15) {
                    v = u;
                    cur = d;
                    moved = true;
                    break;
                }
            }
        }
        if (!moved) break;
    }
    out.translation_length = cur;
    out.witness = TargetPoint::tree(TreePoint(tr, v, 0, 0));
    out.elliptic = (cur <= 0.0);
    return out;
}

}  // namespace catsurf
