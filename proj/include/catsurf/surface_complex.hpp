#pragma once

// Combinatorics of gain triangulations of the closed genus-g surface: the
// quotient triangulation T = (V, E, F) with group-element gains on directed
// edges encoding the universal-cover lift, plus length functions and the
// flattening classification.

#include <array>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "target_space.hpp"
#include "words.hpp"

namespace catsurf {

// ---------------------------------------------------------------------------
// Surface group
// ---------------------------------------------------------------------------

struct SurfaceGroup {
    int genus = 2;

    explicit SurfaceGroup(int g = 2) : genus(g) {
        if (g < 2) throw std::invalid_argument("SurfaceGroup: genus must be >= 2");
    }
    int num_generators() const { return 2 * genus; }
    Word relator() const { return surface_group_relator(genus); }
};

// ---------------------------------------------------------------------------
// Gain triangulation
// ---------------------------------------------------------------------------

struct DirectedEdge {
    int tail = 0;
    int head = 0;
    Word gain;
};

// Directed edges are stored in partner pairs: edge (2k+1) is the reversal of
// edge (2k), with swapped endpoints and inverted gain.  Faces are ordered
// triples of directed edge ids forming tail-to-head cycles.
struct GainTriangulation {
    int genus = 2;
    int num_vertices = 1;
    std::vector<DirectedEdge> edges;
    std::vector<std::array<int, 3>> faces;

    int num_directed() const { return static_cast<int>(edges.size()); }
    int num_undirected() const { return num_directed() / 2; }
    int num_faces() const { return static_cast<int>(faces.size()); }
    static int partner(int e) { return e ^ 1; }
    static int undirected(int e) { return e / 2; }
    static int forward(int undirected_id) { return 2 * undirected_id; }

    // Append a partner pair; returns the id of the forward copy.
    int add_edge(int tail, int head, const Word& gain) {
        int id = num_directed();
        edges.push_back({tail, head, reduce_word(gain)});
        edges.push_back({head, tail, inverse_word(gain)});
        return id;
    }
};

struct Diagnostics {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

inline Diagnostics validate(const GainTriangulation& t) {
    Diagnostics d;
    auto flag = [&](const std::string& s) { d.violations.push_back(s); };

    if (t.num_directed() % 2 != 0) flag("directed edge count is odd (broken partner pairing)");
    for (int e = 0; e + 1 < t.num_directed(); e += 2) {
        const auto& a = t.edges[e];
        const auto& b = t.edges[e + 1];
        if (a.tail != b.head || a.head != b.tail)
            flag("edge " + std::to_string(e) + ": reversed copy has wrong endpoints");
        if (inverse_word(a.gain) != b.gain)
            flag("edge " + std::to_string(e) + ": reversed copy does not invert the gain");
        if (!is_reduced(a.gain)) flag("edge " + std::to_string(e) + ": gain not freely reduced");
    }
    for (const auto& e : t.edges) {
        if (e.tail < 0 || e.tail >= t.num_vertices || e.head < 0 || e.head >= t.num_vertices)
            flag("edge endpoint out of range");
    }
    std::vector<int> used(t.num_directed(), 0);
    for (size_t fi = 0; fi < t.faces.size(); ++fi) {
        const auto& f = t.faces[fi];
        for (int i = 0; i < 3; ++i) {
            int e = f[i], en = f[(i + 1) % 3];
            if (e < 0 || e >= t.num_directed()) {
                flag("face " + std::to_string(fi) + ": edge id out of range");
                continue;
            }
            ++used[e];
            if (en >= 0 && en < t.num_directed() && t.edges[e].head != t.edges[en].tail)
                flag("face " + std::to_string(fi) + ": edges do not concatenate tail-to-head");
        }
    }
    for (int e = 0; e < t.num_directed(); ++e) {
        if (used[e] != 1)
            flag("directed edge " + std::to_string(e) + " used " + std::to_string(used[e]) +
                 " times (each undirected edge must border exactly two face-corners)");
    }
    int V = t.num_vertices, E = t.num_undirected(), F = t.num_faces();
    if (V - E + F != 2 - 2 * t.genus)
        flag("Euler characteristic " + std::to_string(V - E + F) + " != " + std::to_string(2 - 2 * t.genus));
    if (3 * F != 2 * E) flag("3F != 2E");
    return d;
}

// ---------------------------------------------------------------------------
// The one-vertex triangulation of the 4g-gon
// ---------------------------------------------------------------------------

// Corner words gamma_k = x_0 ... x_{k-1} of the standard boundary word
// a1 b1 a1^-1 b1^-1 a2 b2 a2^-1 b2^-1 ... of the 4g-gon.
inline std::vector<Word> polygon_corner_words(int genus) {
    std::vector<int> letters;
    for (int k = 0; k < genus; ++k) {
        int a = 2 * k + 1, b = 2 * k + 2;
        letters.insert(letters.end(), {a, b, -a, -b});
    }
    std::vector<Word> gamma(4 * genus + 1);
    for (int k = 0; k < 4 * genus; ++k) {
        gamma[k + 1] = gamma[k];
        push_reduced(gamma[k + 1], letters[k]);
    }
    return gamma;
}

// One-vertex triangulation of the genus-g surface obtained by triangulating
// the 4g-gon with a diagonal set invariant under the hyperelliptic involution
// (corner k -> corner k + 2g): "ear" triangles on consecutive corner pairs
// plus a centrally symmetric triangulation of the inner even-corner 2g-gon.
// The symmetry makes the single-orbit corner map an exact critical point of
// the discrete energy for symmetric representations, which the plain fan
// from one corner does not achieve.
inline GainTriangulation riemann_triangulation(int genus) {
    if (genus < 2) throw std::invalid_argument("riemann_triangulation: genus must be >= 2");
    const int n = 4 * genus;
    GainTriangulation t;
    t.genus = genus;
    t.num_vertices = 1;

    std::vector<int> letters;
    for (int k = 0; k < genus; ++k) {
        int a = 2 * k + 1, b = 2 * k + 2;
        letters.insert(letters.end(), {a, b, -a, -b});
    }
    auto gamma = polygon_corner_words(genus);

    // Directed polygon-corner step (i -> j) to directed edge id.
    std::map<std::pair<int, int>, int> step;

    // Loop edges, one per generator; boundary step k is the matching copy.
    std::vector<int> loop(2 * genus + 1, -1);
    for (int m = 1; m <= 2 * genus; ++m) loop[m] = t.add_edge(0, 0, Word{m});
    for (int k = 0; k < n; ++k) {
        int x = letters[k];
        int e = (x > 0) ? loop[x] : GainTriangulation::partner(loop[-x]);
        step[{k, (k + 1) % n}] = e;
    }

    // Diagonal (i -> j) with gain gamma_i^-1 gamma_j.
    auto add_diagonal = [&](int i, int j) {
        i %= n;
        j %= n;
        Word g = concat_words(inverse_word(gamma[i]), gamma[j]);
        int e = t.add_edge(0, 0, g);
        step[{i, j}] = e;
        step[{j, i}] = GainTriangulation::partner(e);
    };
    for (int i = 0; i < 2 * genus; ++i) add_diagonal(2 * i, (2 * i + 2) % n);  // crown
    add_diagonal(0, 2 * genus);                                                // core main diagonal
    for (int j = 2; j <= genus - 1; ++j) add_diagonal(0, 2 * j);               // core fan at corner 0
    for (int j = genus + 2; j <= 2 * genus - 1; ++j) add_diagonal(2 * genus, 2 * j);  // mirrored fan

    auto add_face = [&](int c0, int c1, int c2) {
        c0 %= n;
        c1 %= n;
        c2 %= n;
        auto find = [&](int a, int b) {
            auto it = step.find({a, b});
            if (it == step.end()) throw std::logic_error("riemann_triangulation: missing edge");
            return it->second;
        };
        t.faces.push_back({find(c0, c1), find(c1, c2), find(c2, c0)});
    };
    for (int i = 0; i < 2 * genus; ++i) add_face(2 * i, 2 * i + 1, 2 * i + 2);       // ears
    for (int j = 1; j <= genus - 1; ++j) add_face(0, 2 * j, 2 * j + 2);              // core fan at 0
    for (int j = genus + 1; j <= 2 * genus - 1; ++j) add_face(2 * genus, 2 * j, 2 * j + 2);

    return t;
}

// Product of the boundary gains around the 4g-gon (freely reduces to the
// relator by construction; exposed for the boundary-word check).
inline Word boundary_gain_word(int genus) {
    Word w;
    for (int k = 0; k < genus; ++k) {
        int a = 2 * k + 1, b = 2 * k + 2;
        for (int x : {a, b, -a, -b}) push_reduced(w, x);
    }
    return w;
}

// ---------------------------------------------------------------------------
// Equivariant maps and length functions
// ---------------------------------------------------------------------------

// A rho-equivariant map, represented by one target point per quotient vertex.
struct EquivariantMap {
    std::vector<TargetPoint> images;
};

struct LengthFunction {
    std::vector<double> lengths;  // by undirected edge id

    double operator()(int directed_edge) const { return lengths[GainTriangulation::undirected(directed_edge)]; }
};

struct FlattenReport {
    std::vector<int> flat_faces;
    std::vector<int> flat_edges;  // undirected ids
    bool any() const { return !flat_faces.empty() || !flat_edges.empty(); }
};

inline std::array<double, 3> face_side_lengths(const GainTriangulation& t, const LengthFunction& l, int face) {
    const auto& f = t.faces[face];
    return {l(f[0]), l(f[1]), l(f[2])};
}

inline FlattenReport flatten_report(const GainTriangulation& t, const LengthFunction& l, double tol = 1e-10) {
    FlattenReport out;
    for (int fi = 0; fi < t.num_faces(); ++fi) {
        auto s = face_side_lengths(t, l, fi);
        TriangleShape shape{-1, s};
        if (shape.min_slack() < -tol) throw std::invalid_argument("flatten_report: not a length function (triangle inequality violated)");
        if (shape.min_slack() <= tol) out.flat_faces.push_back(fi);
    }
    for (int e = 0; e < t.num_undirected(); ++e) {
        if (l.lengths[e] < -tol) throw std::invalid_argument("flatten_report: negative edge length");
        if (l.lengths[e] <= tol) out.flat_edges.push_back(e);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Lifts through gains
// ---------------------------------------------------------------------------

// Caches rho(gain) per directed edge; the universal cover is never
// materialized, every lifted quantity goes through these isometries.
struct LiftContext {
    const GainTriangulation* t = nullptr;
    const Representation* rep = nullptr;
    std::vector<TargetIsometry> edge_iso;

    LiftContext(const GainTriangulation& tri, const Representation& r) : t(&tri), rep(&r) {
        edge_iso.reserve(tri.num_directed());
        for (const auto& e : tri.edges) edge_iso.push_back(evaluate_word(r, e.gain));
    }

    const TargetSpace& space() const { return rep->target; }

    // Image of the far endpoint of directed edge e, lifted from the base copy
    // of its tail: rho(gain(e)) f(head(e)).
    TargetPoint neighbor_image(const EquivariantMap& f, int e) const {
        return space().apply(edge_iso[e], f.images[t->edges[e].head]);
    }

    // Images of the three corners (tails of the face's edges) in a consistent
    // lift, pre-composed with `base`.
    std::array<TargetPoint, 3> face_images(const EquivariantMap& f, int face, const TargetIsometry& base) const {
        const auto& fc = t->faces[face];
        std::array<TargetPoint, 3> out;
        TargetIsometry acc = base;
        for (int i = 0; i < 3; ++i) {
            out[i] = space().apply(acc, f.images[t->edges[fc[i]].tail]);
            acc = acc.compose(edge_iso[fc[i]]);
        }
        return out;
    }
    std::array<TargetPoint, 3> face_images(const EquivariantMap& f, int face) const {
        return face_images(f, face, TargetIsometry::identity(space().kind));
    }
};

inline LengthFunction length_function_from_map(const GainTriangulation& t, const Representation& rep,
                                               const EquivariantMap& f) {
    LiftContext ctx(t, rep);
    LengthFunction l;
    l.lengths.resize(t.num_undirected());
    for (int u = 0; u < t.num_undirected(); ++u) {
        int e = GainTriangulation::forward(u);
        l.lengths[u] = rep.target.distance(f.images[t.edges[e].tail], ctx.neighbor_image(f, e));
    }
    return l;
}

// ---------------------------------------------------------------------------
// Vertex links
// ---------------------------------------------------------------------------

// Cyclically ordered outgoing directed edges at a vertex (the rotation system
// induced by the oriented faces).  Corner i of the cycle lies between
// out-edges i and i+1.
inline std::vector<int> vertex_link(const GainTriangulation& t, int vertex) {
    // corner keyed by its in-edge (the directed edge whose head is `vertex`).
    std::map<int, int> corner_out;  // in-edge id -> out-edge id within the same face
    for (const auto& f : t.faces) {
        for (int i = 0; i < 3; ++i) {
            int e_in = f[i], e_out = f[(i + 1) % 3];
            if (t.edges[e_out].tail == vertex) corner_out[e_in] = e_out;
        }
    }
    if (corner_out.empty()) throw std::invalid_argument("vertex_link: isolated vertex");
    std::vector<int> cycle;
    int start_in = corner_out.begin()->first;
    int e_in = start_in;
    do {
        auto it = corner_out.find(e_in);
        if (it == corner_out.end()) throw std::logic_error("vertex_link: broken rotation system");
        int e_out = it->second;
        cycle.push_back(e_out);
        e_in = GainTriangulation::partner(e_out);
    } while (e_in != start_in && cycle.size() <= corner_out.size());
    if (cycle.size() != corner_out.size())
        throw std::logic_error("vertex_link: link is not a single cycle");
    return cycle;
}

}  // namespace catsurf
