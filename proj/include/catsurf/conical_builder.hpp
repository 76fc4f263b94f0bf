#pragma once

// Conical hyperbolic surfaces: glue the per-face comparison triangles of a
// metric triangulation, compute cone angles, certify curvature <= -1 via the
// cone-angle criterion, audit with discrete Gauss-Bonnet, and sample-check
// the 1-Lipschitz domination map.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "random.hpp"
#include "surface_complex.hpp"

namespace catsurf {

// ---------------------------------------------------------------------------
// ConicalSurface
// ---------------------------------------------------------------------------

struct ConicalSurface {
    const GainTriangulation* t = nullptr;
    int genus = 0;
    LengthFunction lengths;
    // Per face: shape with sides in face-edge order (|v0 v1|, |v1 v2|, |v2 v0|)
    // where v_i = tail(face edge i); corner_angles[i] is the interior angle at
    // v_i (flat faces contribute the (pi, 0, 0) pattern at the vertex opposite
    // the longest side).
    std::vector<TriangleShape> shapes;
    std::vector<std::array<double, 3>> corner_angles;
    std::vector<bool> face_flat;
    std::vector<double> face_area;
    std::vector<double> cone_angles;  // per vertex
    double area = 0.0;
    FlattenReport flatten;
    // Which face carries each directed edge, and at which slot.
    std::vector<int> face_of_edge, slot_of_edge;
};

inline ConicalSurface build_conical(const GainTriangulation& t, const LengthFunction& l, int genus) {
    auto diag = validate(t);
    if (!diag.ok()) throw std::invalid_argument("build_conical: invalid triangulation: " + diag.violations.front());
    if (static_cast<int>(l.lengths.size()) != t.num_undirected())
        throw std::invalid_argument("build_conical: length function has wrong edge count");

    ConicalSurface c;
    c.t = &t;
    c.genus = genus;
    c.lengths = l;
    c.flatten = flatten_report(t, l);  // throws if not a length function
    c.face_of_edge.assign(t.num_directed(), -1);
    c.slot_of_edge.assign(t.num_directed(), -1);
    c.cone_angles.assign(t.num_vertices, 0.0);

    for (int fi = 0; fi < t.num_faces(); ++fi) {
        TriangleShape shape{-1, face_side_lengths(t, l, fi)};
        TriangleAngles ang = triangle_angles(shape, 1e-10);
        // angles[i] is opposite side i; the vertex opposite side i of the face
        // (v0 v1, v1 v2, v2 v0) is v_{(i+2) mod 3}.
        std::array<double, 3> corners{ang.angles[1], ang.angles[2], ang.angles[0]};
        double a = ang.flat ? 0.0 : kPi - (corners[0] + corners[1] + corners[2]);
        c.shapes.push_back(shape);
        c.corner_angles.push_back(corners);
        c.face_flat.push_back(ang.flat);
        c.face_area.push_back(a);
        c.area += a;
        for (int i = 0; i < 3; ++i) {
            int e = t.faces[fi][i];
            c.face_of_edge[e] = fi;
            c.slot_of_edge[e] = i;
            c.cone_angles[t.edges[e].tail] += corners[i];
        }
    }
    return c;
}

inline double gauss_bonnet_residual(const ConicalSurface& c) {
    double s = c.area - 4 * kPi * (c.genus - 1);
    for (double th : c.cone_angles) s += th - 2 * kPi;
    return std::abs(s);
}

// ---------------------------------------------------------------------------
// Curvature certificate
// ---------------------------------------------------------------------------

struct CurvatureCertificate {
    enum class Status { CurvatureAtMostMinusOne, Fails, Degenerate };
    Status status = Status::Degenerate;
    std::vector<int> failing_vertices;
    std::string reason;
    double margin = 0.0;  // min_v (theta_v - 2 pi)
};

inline CurvatureCertificate curvature_certificate(const ConicalSurface& c) {
    CurvatureCertificate cert;
    double m = std::numeric_limits<double>::infinity();
    for (double th : c.cone_angles) m = std::min(m, th - 2 * kPi);
    cert.margin = m;
    if (!c.flatten.flat_edges.empty()) {
        cert.status = CurvatureCertificate::Status::Degenerate;
        cert.reason = "flat edge (zero length): cone-angle criterion does not apply";
        return cert;
    }
    for (int v = 0; v < static_cast<int>(c.cone_angles.size()); ++v)
        if (c.cone_angles[v] - 2 * kPi < -1e-9) cert.failing_vertices.push_back(v);
    cert.status = cert.failing_vertices.empty() ? CurvatureCertificate::Status::CurvatureAtMostMinusOne
                                                : CurvatureCertificate::Status::Fails;
    return cert;
}

// ---------------------------------------------------------------------------
// Domination map (comparison map per face)
// ---------------------------------------------------------------------------

namespace detail {

// Shape permutation for embed_comparison_triangle, whose side convention is
// (|v0 v1|, |v0 v2|, |v1 v2|); face shapes store (|v0 v1|, |v1 v2|, |v2 v0|).
inline TriangleShape embed_shape(const TriangleShape& face_shape) {
    return TriangleShape{-1, {face_shape.sides[0], face_shape.sides[2], face_shape.sides[1]}};
}

inline double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return edot(a, ecross(b, c)); }

inline void check_barycentric(const std::array<double, 3>& lam) {
    double s = lam[0] + lam[1] + lam[2];
    if (!(lam[0] >= -1e-12 && lam[1] >= -1e-12 && lam[2] >= -1e-12) || std::abs(s - 1.0) > 1e-9)
        throw std::invalid_argument("domination_map_eval: invalid barycentric coordinates");
}

// Two-geodesic coordinates: locate the point with "barycentric" weights lam in
// a triangle given by a generic point-kind P with distance/geodesic callbacks.
template <typename Point, typename GeodesicPoint>
Point two_geodesic_point(const std::array<Point, 3>& v, const std::array<double, 3>& lam, GeodesicPoint geo) {
    double l12 = lam[1] + lam[2];
    if (l12 <= 1e-15) return v[0];
    Point q = geo(v[1], v[2], lam[2] / l12);
    return geo(q, v[0], lam[0]);
}

}  // namespace detail

// Chart point of a face in its canonical H2 embedding, by the same
// two-geodesic construction used for the image (so chart and image points
// correspond under the comparison map).
inline HPoint chart_point(const ConicalSurface& c, int face, const std::array<double, 3>& lam) {
    if (c.face_flat[face]) throw std::invalid_argument("chart_point: degenerate chart (flat face)");
    detail::check_barycentric(lam);
    auto v = embed_comparison_triangle(detail::embed_shape(c.shapes[face]));
    return detail::two_geodesic_point(v, lam, [](const HPoint& a, const HPoint& b, double s) {
        return h_geodesic_point(a, b, s);
    });
}

// Image in X of the chart point with barycentric coordinates lam on `face`,
// under the per-face comparison map (vertices map to the lifted vertex
// images; sides map isometrically).  `base` pre-composes the lift.
inline TargetPoint domination_map_eval(const ConicalSurface& c, const GainTriangulation& t,
                                       const Representation& rep, const EquivariantMap& f, int face,
                                       const std::array<double, 3>& lam,
                                       const TargetIsometry* base = nullptr) {
    if (c.face_flat[face]) throw std::invalid_argument("domination_map_eval: degenerate chart (flat face)");
    detail::check_barycentric(lam);
    LiftContext ctx(t, rep);
    auto y = base ? ctx.face_images(f, face, *base) : ctx.face_images(f, face);
    const TargetSpace& space = rep.target;
    return detail::two_geodesic_point(y, lam, [&](const TargetPoint& a, const TargetPoint& b, double s) {
        return space.geodesic_point(a, b, s);
    });
}

// ---------------------------------------------------------------------------
// Lipschitz sample check
// ---------------------------------------------------------------------------

struct DominationReport {
    int samples = 0;
    double max_ratio = 0.0;
    double max_ratio_within = 0.0;
    double max_ratio_cross = 0.0;
    int cross_routed = 0;  // cross-edge pairs bounded via an edge endpoint
    int skipped = 0;       // chart distance below resolution
    bool pass = true;
};

namespace detail {

inline std::array<double, 3> random_barycentric(RandomStream& rng) {
    double e0 = -std::log(std::max(rng.uniform(), 0x1.0p-60));
    double e1 = -std::log(std::max(rng.uniform(), 0x1.0p-60));
    double e2 = -std::log(std::max(rng.uniform(), 0x1.0p-60));
    double s = e0 + e1 + e2;
    return {e0 / s, e1 / s, e2 / s};
}

// Reflection of the hyperboloid across the geodesic through a and b.
inline HPoint h_reflect(const HPoint& a, const HPoint& b, const HPoint& x) {
    Vec3 n = lorentz_cross(a.c, b.c);
    double nn = mdot(n, n);  // spacelike: > 0
    Vec3 r = x.c - (2.0 * mdot(x.c, n) / nn) * n;
    return HPoint(r);
}

// Extended-precision hyperboloid toolkit for the Lipschitz sampler.  The
// certified ratio bound 1 + 1e-9 leaves no room for the ~1e-8 double
// rounding of geodesic interpolation at unfolded-chart coordinate scales
// (Minkowski coordinates up to cosh of twice the face diameter), so the
// sampler re-embeds each triangle from its side lengths and interpolates in
// long double.
using LVec3 = std::array<long double, 3>;

inline long double lmdot(const LVec3& a, const LVec3& b) { return a[0] * b[0] - a[1] * b[1] - a[2] * b[2]; }

inline LVec3 lcomb(long double s, const LVec3& a, long double t, const LVec3& b) {
    return {s * a[0] + t * b[0], s * a[1] + t * b[1], s * a[2] + t * b[2]};
}

inline long double l_det3(const LVec3& a, const LVec3& b, const LVec3& c) {
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
           a[2] * (b[0] * c[1] - b[1] * c[0]);
}

inline long double l_dist(const LVec3& p, const LVec3& q) {
    LVec3 d{q[0] - p[0], q[1] - p[1], q[2] - p[2]};
    long double s2 = -lmdot(d, d);
    return 2.0L * std::asinh(0.5L * std::sqrt(std::max(s2, 0.0L)));
}

inline LVec3 l_geo(const LVec3& p, const LVec3& q, long double t) {
    long double d = l_dist(p, q);
    if (d <= 0.0L) return p;
    long double ch = std::cosh(d), sh = std::sinh(d);
    LVec3 u = lcomb(1.0L / sh, q, -ch / sh, p);
    LVec3 x = lcomb(std::cosh(t * d), p, std::sinh(t * d), u);
    long double n = std::sqrt(std::max(lmdot(x, x), 1e-30L));
    return {x[0] / n, x[1] / n, x[2] / n};
}

inline LVec3 l_two_geo(const std::array<LVec3, 3>& v, const std::array<double, 3>& lam) {
    long double l12 = static_cast<long double>(lam[1]) + static_cast<long double>(lam[2]);
    if (l12 <= 1e-15L) return v[0];
    LVec3 q = l_geo(v[1], v[2], static_cast<long double>(lam[2]) / l12);
    return l_geo(q, v[0], static_cast<long double>(lam[0]));
}

// Embed a triangle with prescribed side lengths: corner i0 at the origin,
// corner i1 on the +x geodesic, corner i2 in the half-plane of sign `ysign`.
// a = d(i0,i1), b = d(i0,i2), cc = d(i1,i2).
inline std::array<LVec3, 3> l_embed(int i0, int i1, int i2, long double a, long double b, long double cc,
                                    long double ysign) {
    std::array<LVec3, 3> out;
    out[i0] = {1.0L, 0.0L, 0.0L};
    out[i1] = {std::cosh(a), std::sinh(a), 0.0L};
    long double ca = (std::cosh(a) * std::cosh(b) - std::cosh(cc)) / (std::sinh(a) * std::sinh(b));
    ca = std::min(1.0L, std::max(-1.0L, ca));
    long double sa = std::sqrt(std::max(1.0L - ca * ca, 0.0L));
    out[i2] = {std::cosh(b), std::sinh(b) * ca, std::sinh(b) * sa * ysign};
    return out;
}

}  // namespace detail

inline DominationReport lipschitz_sample_check(const ConicalSurface& c, const GainTriangulation& t,
                                               const Representation& rep, const EquivariantMap& f,
                                               int n_pairs, std::uint64_t seed) {
    if (c.flatten.any())
        throw std::invalid_argument("lipschitz_sample_check: degenerate surface (flat face or edge)");
    LiftContext ctx(t, rep);
    const TargetSpace& space = rep.target;
    RandomStream rng(seed);
    DominationReport rep_out;
    const double tol = 1e-9;

    // Pre-embed every face and precompute its lifted vertex images.  H2
    // image configurations are recentered at the origin: lifted corners can
    // sit at Minkowski coordinates ~e^{2R} where geodesic interpolation
    // loses ~7 digits to cancellation, which would swamp the 1e-9 ratio
    // certificate.  Recentering is an isometry, so sampled distances are
    // unchanged up to the (much smaller) recentering rounding.
    std::vector<std::array<HPoint, 3>> chart(t.num_faces(), {HPoint(1, 0, 0), HPoint(1, 0, 0), HPoint(1, 0, 0)});
    std::vector<std::array<TargetPoint, 3>> images(t.num_faces());
    std::vector<TargetIsometry> recenter(t.num_faces(), TargetIsometry::identity(space.kind));
    for (int fi = 0; fi < t.num_faces(); ++fi) {
        chart[fi] = embed_comparison_triangle(detail::embed_shape(c.shapes[fi]));
        images[fi] = ctx.face_images(f, fi);
        if (space.kind == TargetKind::H2) {
            recenter[fi] = TargetIsometry::h2(h_recenter_isometry(images[fi][0].h));
            for (auto& p : images[fi]) p = space.apply(recenter[fi], p);
        }
    }
    auto h_geo = [](const HPoint& a, const HPoint& b, double s) { return h_geodesic_point(a, b, s); };
    auto x_geo = [&](const TargetPoint& a, const TargetPoint& b, double s) { return space.geodesic_point(a, b, s); };

    auto check_pair = [&](double d_chart, double d_image, double& bucket) {
        if (d_chart < tol) {
            ++rep_out.skipped;
            return;
        }
        double ratio = d_image / d_chart;
        bucket = std::max(bucket, ratio);
        rep_out.max_ratio = std::max(rep_out.max_ratio, ratio);
        if (ratio > 1.0 + tol) rep_out.pass = false;
        ++rep_out.samples;
    };

    int n_within = n_pairs / 2;

    if (space.kind != TargetKind::H2) {
        // Generic path (tree targets).  In practice tree-valued maps always
        // produce flat faces and are rejected above; kept for completeness.
        for (int k = 0; k < n_within; ++k) {
            int fi = rng.uniform_int(t.num_faces());
            auto l1 = detail::random_barycentric(rng);
            auto l2 = detail::random_barycentric(rng);
            HPoint p1 = detail::two_geodesic_point(chart[fi], l1, h_geo);
            HPoint p2 = detail::two_geodesic_point(chart[fi], l2, h_geo);
            TargetPoint y1 = detail::two_geodesic_point(images[fi], l1, x_geo);
            TargetPoint y2 = detail::two_geodesic_point(images[fi], l2, x_geo);
            check_pair(h_distance(p1, p2), space.distance(y1, y2), rep_out.max_ratio_within);
        }
        for (int k = n_within; k < n_pairs; ++k) {
            int e = rng.uniform_int(t.num_directed());
            int ep = GainTriangulation::partner(e);
            int f1 = c.face_of_edge[e], s1 = c.slot_of_edge[e];
            int f2 = c.face_of_edge[ep], s2 = c.slot_of_edge[ep];
            HIsometry rc = h_recenter_isometry(chart[f1][s1]);
            std::array<HPoint, 3> ch1{rc.apply(chart[f1][0]), rc.apply(chart[f1][1]), rc.apply(chart[f1][2])};
            HPoint pa = ch1[s1], pb = ch1[(s1 + 1) % 3];
            const auto& ch2 = chart[f2];
            HIsometry u = h_isometry_from_segments(ch2[s2], ch2[(s2 + 1) % 3], pb, pa);
            std::array<HPoint, 3> ch2u{u.apply(ch2[0]), u.apply(ch2[1]), u.apply(ch2[2])};
            double side1 = detail::det3(pa.c, pb.c, ch1[(s1 + 2) % 3].c);
            double side2 = detail::det3(pa.c, pb.c, ch2u[(s2 + 2) % 3].c);
            if (side1 * side2 > 0.0)
                for (auto& p : ch2u) p = detail::h_reflect(pa, pb, p);
            TargetIsometry acc1 = TargetIsometry::identity(space.kind);
            for (int i = 0; i <= s1; ++i) acc1 = acc1.compose(ctx.edge_iso[t.faces[f1][i]]);
            TargetIsometry acc2 = TargetIsometry::identity(space.kind);
            for (int i = 0; i < s2; ++i) acc2 = acc2.compose(ctx.edge_iso[t.faces[f2][i]]);
            TargetIsometry base2 = acc1.compose(acc2.inverse());
            auto img1 = images[f1];
            auto img2 = ctx.face_images(f, f2, base2);

            auto l1b = detail::random_barycentric(rng);
            auto l2b = detail::random_barycentric(rng);
            HPoint p1 = detail::two_geodesic_point(ch1, l1b, h_geo);
            HPoint p2 = detail::two_geodesic_point(ch2u, l2b, h_geo);
            TargetPoint y1 = detail::two_geodesic_point(img1, l1b, x_geo);
            TargetPoint y2 = detail::two_geodesic_point(img2, l2b, x_geo);

            double da = detail::det3(p1.c, p2.c, pa.c) * detail::det3(p1.c, p2.c, pb.c);
            double db = detail::det3(pa.c, pb.c, p1.c) * detail::det3(pa.c, pb.c, p2.c);
            double d_chart;
            if (da < 0.0 && db < 0.0) {
                d_chart = h_distance(p1, p2);
            } else {
                d_chart = std::min(h_distance(p1, pa) + h_distance(pa, p2),
                                   h_distance(p1, pb) + h_distance(pb, p2));
                ++rep_out.cross_routed;
            }
            check_pair(d_chart, space.distance(y1, y2), rep_out.max_ratio_cross);
        }
        return rep_out;
    }

    // H2 path: both chart and image configurations are determined up to
    // isometry by side lengths (plus, across an edge, the fold orientation
    // of the image union), so re-embed from metric data and interpolate in
    // long double.  Chart sides are the stored shape sides; image sides are
    // measured on the recentered lifts (small coordinates, stable).
    std::vector<std::array<double, 3>> img_sides(t.num_faces());
    for (int fi = 0; fi < t.num_faces(); ++fi)
        for (int k = 0; k < 3; ++k) {
            double measured = space.distance(images[fi][k], images[fi][(k + 1) % 3]);
            double stored = c.shapes[fi].sides[k];
            // The comparison map matches chart sides to image sides by
            // definition, so when the surface was built from this map the two
            // are the same real number reached by two double computations
            // (defect ~1e-12 at lift coordinate scales).  Keeping both copies
            // would re-inject that defect as an absolute error on every
            // cross-edge pair distance; a genuine mismatch (surface not built
            // from the map) stays far above the snap window and is reported.
            img_sides[fi][k] = (std::abs(measured - stored) <= 1e-9 * (1.0 + stored)) ? stored : measured;
        }

    // l_embed argument order for corner cycle (i0, i1, i2) with sides[k] =
    // d(corner k, corner k+1): a = sides[i0], b = sides[i2], cc = sides[i1].
    auto embed_cycle = [](const std::array<double, 3>& s, int i0, long double ysign) {
        int i1 = (i0 + 1) % 3, i2 = (i0 + 2) % 3;
        return detail::l_embed(i0, i1, i2, s[i0], s[i2], s[i1], ysign);
    };

    for (int k = 0; k < n_within; ++k) {
        int fi = rng.uniform_int(t.num_faces());
        auto l1 = detail::random_barycentric(rng);
        auto l2 = detail::random_barycentric(rng);
        auto ct = embed_cycle(c.shapes[fi].sides, 0, 1.0L);
        auto it = embed_cycle(img_sides[fi], 0, 1.0L);
        detail::LVec3 p1 = detail::l_two_geo(ct, l1), p2 = detail::l_two_geo(ct, l2);
        detail::LVec3 y1 = detail::l_two_geo(it, l1), y2 = detail::l_two_geo(it, l2);
        check_pair(static_cast<double>(detail::l_dist(p1, p2)), static_cast<double>(detail::l_dist(y1, y2)),
                   rep_out.max_ratio_within);
    }

    for (int k = n_within; k < n_pairs; ++k) {
        // Random directed edge; unfold its two faces along the shared side.
        int e = rng.uniform_int(t.num_directed());
        int ep = GainTriangulation::partner(e);
        int f1 = c.face_of_edge[e], s1 = c.slot_of_edge[e];
        int f2 = c.face_of_edge[ep], s2 = c.slot_of_edge[ep];

        // Fold orientation of the image union: glue face2's lift along e and
        // compare sides of the shared image geodesic.  Only the sign is
        // consumed, so double precision at large lift coordinates is fine.
        TargetIsometry acc1 = TargetIsometry::identity(space.kind);
        for (int i = 0; i <= s1; ++i) acc1 = acc1.compose(ctx.edge_iso[t.faces[f1][i]]);
        TargetIsometry acc2 = TargetIsometry::identity(space.kind);
        for (int i = 0; i < s2; ++i) acc2 = acc2.compose(ctx.edge_iso[t.faces[f2][i]]);
        TargetIsometry ri = TargetIsometry::h2(h_recenter_isometry(images[f1][s1].h));
        TargetIsometry pre2 = ri.compose(recenter[f1]).compose(acc1.compose(acc2.inverse()));
        auto img2 = ctx.face_images(f, f2, pre2);
        HPoint ya = space.apply(ri, images[f1][s1]).h, yb = space.apply(ri, images[f1][(s1 + 1) % 3]).h;
        double sideA = detail::det3(ya.c, yb.c, space.apply(ri, images[f1][(s1 + 2) % 3]).h.c);
        double sideB = detail::det3(ya.c, yb.c, img2[(s2 + 2) % 3].h.c);
        bool folded = sideA * sideB > 0.0;

        // Chart union: corner s1 of face1 at the origin = corner (s2+1) of
        // face2; corner (s1+1) of face1 on +x = corner s2 of face2; third
        // corners on opposite sides.  Image union mirrors it, except the
        // face2 triangle lands on face1's side when folded.
        auto ch1 = embed_cycle(c.shapes[f1].sides, s1, 1.0L);
        auto ch2 = detail::l_embed((s2 + 1) % 3, s2, (s2 + 2) % 3, c.shapes[f2].sides[s2],
                                   c.shapes[f2].sides[(s2 + 1) % 3], c.shapes[f2].sides[(s2 + 2) % 3], -1.0L);
        auto im1 = embed_cycle(img_sides[f1], s1, 1.0L);
        auto im2 = detail::l_embed((s2 + 1) % 3, s2, (s2 + 2) % 3, img_sides[f2][s2], img_sides[f2][(s2 + 1) % 3],
                                   img_sides[f2][(s2 + 2) % 3], folded ? 1.0L : -1.0L);

        auto l1b = detail::random_barycentric(rng);
        auto l2b = detail::random_barycentric(rng);
        detail::LVec3 p1 = detail::l_two_geo(ch1, l1b), p2 = detail::l_two_geo(ch2, l2b);
        detail::LVec3 y1 = detail::l_two_geo(im1, l1b), y2 = detail::l_two_geo(im2, l2b);

        // Does the straight chart segment cross the open shared edge?
        detail::LVec3 pa = ch1[s1], pb = ch1[(s1 + 1) % 3];
        long double da = detail::l_det3(p1, p2, pa) * detail::l_det3(p1, p2, pb);
        long double db = detail::l_det3(pa, pb, p1) * detail::l_det3(pa, pb, p2);
        long double d_chart;
        if (da < 0.0L && db < 0.0L) {
            d_chart = detail::l_dist(p1, p2);
        } else {
            d_chart = std::min(detail::l_dist(p1, pa) + detail::l_dist(pa, p2),
                               detail::l_dist(p1, pb) + detail::l_dist(pb, p2));
            ++rep_out.cross_routed;
        }
        check_pair(static_cast<double>(d_chart), static_cast<double>(detail::l_dist(y1, y2)),
                   rep_out.max_ratio_cross);
    }
    return rep_out;
}

}  // namespace catsurf
