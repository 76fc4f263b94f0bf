#pragma once

// Rigidity detection: link polygons in the space of directions at a vertex
// image, the local-geodesic criterion, spherical polygon radius, the P_eps
// vertex cut, spherical majorization with angle persistence, and great-circle
// deviation.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "surface_complex.hpp"

namespace catsurf {

// ---------------------------------------------------------------------------
// Link polygons
// ---------------------------------------------------------------------------

struct LinkPolygon {
    int vertex = 0;
    // alpha[i]: target angle at F(x) between consecutive neighbor images
    // Y_i, Y_{i+1}; alpha_tilde[i]: the comparison angle of the same triple;
    // span[i]: target angle between Y_i and Y_{i+2}.
    std::vector<double> alpha, alpha_tilde, span;
    std::vector<double> leg;  // d(F(x), Y_i)

    int size() const { return static_cast<int>(alpha.size()); }
    double angle_sum() const {
        double s = 0.0;
        for (double a : alpha_tilde) s += a;
        return s;
    }
};

inline LinkPolygon link_polygon(const GainTriangulation& t, const Representation& rep,
                                const EquivariantMap& f, int vertex) {
    LiftContext ctx(t, rep);
    const TargetSpace& space = rep.target;
    std::vector<int> cycle = vertex_link(t, vertex);
    const int n = static_cast<int>(cycle.size());
    const TargetPoint& z = f.images[vertex];

    std::vector<TargetPoint> y;
    y.reserve(n);
    for (int e : cycle) y.push_back(ctx.neighbor_image(f, e));
    LinkPolygon link;
    link.vertex = vertex;
    for (int i = 0; i < n; ++i) {
        double d = space.distance(z, y[i]);
        if (d <= 1e-12) throw std::invalid_argument("link_polygon: flat edge at vertex");
        link.leg.push_back(d);
    }
    for (int i = 0; i < n; ++i) {
        const TargetPoint& yi = y[i];
        const TargetPoint& yj = y[(i + 1) % n];
        link.alpha.push_back(space.angle(z, yi, yj));
        link.alpha_tilde.push_back(
            comparison_angle(-1, link.leg[i], link.leg[(i + 1) % n], space.distance(yi, yj)));
        link.span.push_back(space.angle(z, yi, y[(i + 2) % n]));
    }
    return link;
}

inline std::vector<double> local_geodesic_test(const LinkPolygon& link) {
    const int n = link.size();
    std::vector<double> res(n);
    for (int i = 0; i < n; ++i) res[i] = std::abs(link.alpha[i] + link.alpha[(i + 1) % n] - link.span[i]);
    return res;
}

struct RigidityVerdict {
    enum class Status { Rigid, NotRigid, Inconclusive };
    Status status = Status::Inconclusive;
    double angle_sum_residual = 0.0;               // sum alpha_tilde - 2 pi
    std::vector<double> equality_residuals;        // alpha_tilde_i - alpha_i
    std::vector<double> local_geodesic_residuals;  // |alpha_i + alpha_{i+1} - span_i|
};

inline RigidityVerdict rigidity_detect(const LinkPolygon& link, double tol) {
    RigidityVerdict v;
    v.angle_sum_residual = link.angle_sum() - 2 * kPi;
    double max_eq = 0.0, max_geo = 0.0;
    for (int i = 0; i < link.size(); ++i) {
        v.equality_residuals.push_back(link.alpha_tilde[i] - link.alpha[i]);
        max_eq = std::max(max_eq, std::abs(v.equality_residuals.back()));
    }
    v.local_geodesic_residuals = local_geodesic_test(link);
    for (double r : v.local_geodesic_residuals) max_geo = std::max(max_geo, r);
    if (std::abs(v.angle_sum_residual) <= tol && max_eq <= tol && max_geo <= tol)
        v.status = RigidityVerdict::Status::Rigid;
    else if (v.angle_sum_residual >= 10 * tol)
        v.status = RigidityVerdict::Status::NotRigid;
    else
        v.status = RigidityVerdict::Status::Inconclusive;
    return v;
}

// ---------------------------------------------------------------------------
// Spherical polygons
// ---------------------------------------------------------------------------

struct SphericalPolygon {
    std::vector<SPoint> vertices;

    int size() const { return static_cast<int>(vertices.size()); }
    double side(int i) const { return s_distance(vertices[i], vertices[(i + 1) % size()]); }
    double perimeter() const {
        double s = 0.0;
        for (int i = 0; i < size(); ++i) s += side(i);
        return s;
    }
    void check() const {
        if (size() < 3) throw std::invalid_argument("SphericalPolygon: needs at least 3 vertices");
        for (int i = 0; i < size(); ++i)
            if (s_distance(vertices[i], vertices[(i + 1) % size()]) >= kPi - 1e-12)
                throw std::invalid_argument("SphericalPolygon: consecutive vertices (near-)antipodal");
    }
};

namespace detail {

// Max spherical distance from c to the polygon boundary curve, exact per
// edge: along an arc P(t), <c, P(t)> = A sin(tL) + B cos(tL); the minimum of
// the dot (= farthest point) is at an endpoint or the interior critical point.
inline double cover_radius(const SphericalPolygon& p, const SPoint& c) {
    double min_dot = 1.0;
    const int n = p.size();
    for (int i = 0; i < n; ++i) {
        const Vec3& u = p.vertices[i].c;
        const Vec3& v = p.vertices[(i + 1) % n].c;
        double cu = edot(c.c, u), cv = edot(c.c, v);
        min_dot = std::min({min_dot, cu, cv});
        double cosL = clamp(edot(u, v), -1.0, 1.0);
        double L = std::acos(cosL);
        if (L < 1e-14) continue;
        double sinL = std::sin(L);
        double A = (cv - cosL * cu) / sinL, B = cu;
        double R = std::hypot(A, B);
        if (R < 1e-300) continue;
        double phi = std::atan2(B, A);  // dot(t) = R sin(tL + phi)
        // interior minimum at tL + phi = -pi/2 (mod 2 pi)
        for (double target : {-kPi / 2, 3 * kPi / 2}) {
            double tl = target - phi;
            if (tl > 0.0 && tl < L) min_dot = std::min(min_dot, R * std::sin(tl + phi));
        }
    }
    return std::acos(clamp(min_dot, -1.0, 1.0));
}

inline SPoint s_normalize(const Vec3& v) {
    double n = enorm(v);
    if (n <= 1e-14) throw std::invalid_argument("s_normalize: zero vector");
    return SPoint((1.0 / n) * v);
}

// Local pattern-search refinement of the covering center.
inline SPoint refine_center(const SphericalPolygon& p, SPoint c) {
    double best = cover_radius(p, c);
    double step = 0.2;
    while (step > 1e-12) {
        bool improved = false;
        // orthonormal tangent frame at c
        Vec3 a = std::abs(c.c[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
        Vec3 t1 = ecross(c.c, a);
        t1 = (1.0 / enorm(t1)) * t1;
        Vec3 t2 = ecross(c.c, t1);
        for (const Vec3& d : {t1, -1.0 * t1, t2, -1.0 * t2}) {
            SPoint trial = s_exp(c, d, step);
            double r = cover_radius(p, trial);
            if (r < best - 1e-15) {
                best = r;
                c = trial;
                improved = true;
                break;
            }
        }
        if (!improved) step *= 0.5;
    }
    return c;
}

}  // namespace detail

// Smallest enclosing-circle radius of the polygon curve, certified from
// above: the returned radius is the exact covering radius of the returned
// center (multi-start local optimization can only overestimate the optimum).
inline std::pair<double, SPoint> spherical_polygon_radius(const SphericalPolygon& p) {
    p.check();
    const int n = p.size();
    std::vector<SPoint> starts;
    Vec3 sum{0, 0, 0};
    for (const auto& v : p.vertices) sum = sum + v.c;
    if (enorm(sum) > 1e-12) starts.push_back(detail::s_normalize(sum));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                Vec3 nrm = ecross(p.vertices[i].c - p.vertices[j].c, p.vertices[i].c - p.vertices[k].c);
                if (enorm(nrm) < 1e-12) continue;
                starts.push_back(detail::s_normalize(nrm));
                starts.push_back(detail::s_normalize(-1.0 * nrm));
            }
    if (starts.empty()) starts.push_back(p.vertices[0]);
    // Refinement only improves a start, and the result is certified from
    // above regardless of which start wins, so rank the starts by their raw
    // covering radius and refine just the most promising ones.
    std::vector<std::pair<double, int>> ranked;
    ranked.reserve(starts.size());
    for (int i = 0; i < static_cast<int>(starts.size()); ++i)
        ranked.push_back({detail::cover_radius(p, starts[i]), i});
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    const int keep = std::min<int>(8, static_cast<int>(ranked.size()));
    double best = std::numeric_limits<double>::infinity();
    SPoint center = starts.front();
    for (int i = 0; i < keep; ++i) {
        SPoint c = detail::refine_center(p, starts[ranked[i].second]);
        double r = detail::cover_radius(p, c);
        if (r < best) {
            best = r;
            center = c;
        }
    }
    return {best, center};
}

// The P_eps construction: cut the corner at `index` by joining the points at
// distance eps along the two adjacent sides and replacing the vertex by the
// midpoint of that chord.
inline SphericalPolygon vertex_perturb(const SphericalPolygon& p, int index, double eps) {
    p.check();
    const int n = p.size();
    const SPoint& prev = p.vertices[(index + n - 1) % n];
    const SPoint& cur = p.vertices[index];
    const SPoint& next = p.vertices[(index + 1) % n];
    double s_prev = s_distance(prev, cur), s_next = s_distance(cur, next);
    if (!(eps > 0.0) || eps >= s_prev || eps >= s_next)
        throw std::invalid_argument("vertex_perturb: eps must be smaller than both adjacent sides");
    double angle = s_angle(cur, prev, next);
    if (angle >= kPi - 1e-6) throw std::invalid_argument("vertex_perturb: no angle to cut (angle >= pi)");
    SPoint q1 = s_exp(cur, s_unit_tangent(cur, prev), eps);
    SPoint q3 = s_exp(cur, s_unit_tangent(cur, next), eps);
    SphericalPolygon out = p;
    out.vertices[index] = s_geodesic_point(q1, q3, 0.5);
    return out;
}

// ---------------------------------------------------------------------------
// Majorization (Reshetnyak induction on S^2)
// ---------------------------------------------------------------------------

namespace detail {

// Abstract polygon data for the induction: cyclic side lengths and the full
// matrix of intrinsic distances of the (possibly glued) source space.
struct MajorInput {
    std::vector<double> sides;              // sides[i] = d(v_i, v_{i+1})
    std::vector<std::vector<double>> dist;  // dist[i][j]
    std::vector<int> labels;                // original vertex index, or -1 for merged-in flats
};

inline double glued_distance(const SPoint& x, const SPoint& y, const SPoint& a, const SPoint& b) {
    // Exact distance in the abstract gluing of two spherical pieces along the
    // arc [a, b]: minimize d(x,z) + d(z,y) over z on the arc.
    double lo = 0.0, hi = 1.0;
    auto val = [&](double t) {
        SPoint z = s_geodesic_point(a, b, t);
        return s_distance(x, z) + s_distance(z, y);
    };
    for (int k = 0; k < 120; ++k) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (val(m1) <= val(m2))
            hi = m2;
        else
            lo = m1;
    }
    return std::min({val(0.5 * (lo + hi)), val(0.0), val(1.0)});
}

inline double polygon_interior_angle(const std::vector<SPoint>& v, int i) {
    const int n = static_cast<int>(v.size());
    return s_angle(v[i], v[(i + n - 1) % n], v[(i + 1) % n]);
}

// Returns convex vertex positions for the polygon described by `in`.
inline std::vector<SPoint> majorize_rec(const MajorInput& in) {
    const int n = static_cast<int>(in.sides.size());
    if (n == 3) {
        auto tri = embed_spherical_triangle(TriangleShape{1, {in.sides[0], in.sides[2], in.sides[1]}});
        return {tri[0], tri[1], tri[2]};
    }
    // Split off the triangle (v0, v1, v2) across the diagonal d02.
    double s0 = in.sides[0], s1 = in.sides[1];
    double d02 = std::min(in.dist[0][2], s0 + s1);
    d02 = std::max(d02, std::abs(s0 - s1));

    MajorInput q;
    q.sides.push_back(d02);
    for (int i = 2; i < n; ++i) q.sides.push_back(in.sides[i]);
    std::vector<int> idx{0};
    for (int i = 2; i < n; ++i) idx.push_back(i);
    const int m = static_cast<int>(idx.size());
    q.dist.assign(m, std::vector<double>(m, 0.0));
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) q.dist[a][b] = in.dist[idx[a]][idx[b]];
    q.labels.resize(m);
    for (int a = 0; a < m; ++a) q.labels[a] = in.labels[idx[a]];

    std::vector<SPoint> w = majorize_rec(q);  // w[0] ~ v0, w[1] ~ v2, w[2] ~ v3, ...
    const SPoint& w0 = w[0];
    const SPoint& w2 = w[1];

    // Place the comparison triangle of (s0, s1, d02) on the exterior side of
    // the convex polygon w across [w0, w2].
    if (d02 <= 1e-13) {
        // Degenerate diagonal: v1 folds back; treat v1 as a flat spike along
        // the (equal) sides, placed toward the polygon interior boundary.
        std::vector<SPoint> out;
        out.push_back(w[0]);
        out.push_back(s_exp(w0, s_unit_tangent(w0, w[m - 1]), std::min(s0, kPi - 1e-9)));
        for (int a = 1; a < m; ++a) out.push_back(w[a]);
        return out;
    }
    double a0 = (s0 <= 1e-14) ? 0.0 : comparison_angle(1, d02, s0, s1);  // angle at v0 in the triangle
    Vec3 u = s_unit_tangent(w0, w2);
    Vec3 uperp = ecross(w0.c, u);
    // Interior reference: centroid of w.
    Vec3 cen{0, 0, 0};
    for (const auto& pt : w) cen = cen + pt.c;
    double interior_side = edot(ecross(w0.c, w2.c), cen);
    double sign = (interior_side >= 0.0) ? -1.0 : 1.0;  // exterior of the polygon
    SPoint p1 = s_exp(w0, std::cos(a0) * u + (sign * std::sin(a0)) * uperp, s0);

    // Convexity at the two shared vertices.
    double ang_q0 = polygon_interior_angle(w, 0);
    double ang_q2 = polygon_interior_angle(w, 1);
    double ang_t0 = a0;
    double ang_t2 = (s1 <= 1e-14) ? 0.0 : comparison_angle(1, d02, s1, s0);
    const double ctol = 1e-12;

    if (ang_q0 + ang_t0 <= kPi + ctol && ang_q2 + ang_t2 <= kPi + ctol) {
        std::vector<SPoint> out;
        out.push_back(w[0]);
        out.push_back(p1);
        for (int a = 1; a < m; ++a) out.push_back(w[a]);
        return out;
    }

    // Non-convex at a shared vertex: merge it away (Alexandrov's lemma) and
    // recurse on the (n-1)-gon whose distances live in the glued space.
    int drop = (ang_q0 + ang_t0 > kPi + ctol) ? 0 : 2;  // original index being flattened
    std::vector<SPoint> glued(n);  // positions of all original vertices in the glued picture
    glued[0] = w[0];
    glued[1] = p1;
    for (int a = 1; a < m; ++a) glued[idx[a]] = w[a];

    MajorInput r;
    std::vector<int> keep;
    for (int i = 0; i < n; ++i)
        if (i != drop) keep.push_back(i);
    const int nk = static_cast<int>(keep.size());
    r.labels.resize(nk);
    r.dist.assign(nk, std::vector<double>(nk, 0.0));
    std::vector<double> flat_offset(nk, -1.0);  // arclength position of the dropped vertex on a side
    for (int a = 0; a < nk; ++a) {
        r.labels[a] = in.labels[keep[a]];
        int ia = keep[a], ia_next = keep[(a + 1) % nk];
        // side from keep[a] to keep[a+1]; if the dropped vertex sat between
        // them, the side is the sum of the two flattened sides.
        if ((ia + 1) % n == drop) {
            r.sides.push_back(in.sides[ia] + in.sides[drop]);
            flat_offset[a] = in.sides[ia];
        } else {
            r.sides.push_back(in.sides[ia]);
        }
        (void)ia_next;
    }
    // Distances in the glued space: pairs on the same piece use S^2 distance
    // of the glued picture only when both lie on that embedded piece; the
    // mixed pairs (p1 vs the rest) go through the shared arc.
    for (int a = 0; a < nk; ++a)
        for (int b = a + 1; b < nk; ++b) {
            int ia = keep[a], ib = keep[b];
            double d;
            bool a_is_p1 = (ia == 1), b_is_p1 = (ib == 1);
            if (a_is_p1 || b_is_p1) {
                const SPoint& x = glued[ia];
                const SPoint& y = glued[ib];
                if (a_is_p1 && b_is_p1)
                    d = 0.0;
                else if ((a_is_p1 && (ib == 0 || ib == 2)) || (b_is_p1 && (ia == 0 || ia == 2)))
                    d = s_distance(x, y);  // within the triangle piece
                else
                    d = glued_distance(x, y, w0, w2);
            } else {
                d = in.dist[ia][ib];  // both on the Q piece: inductive distances
            }
            r.dist[a][b] = r.dist[b][a] = d;
        }
    std::vector<SPoint> wr = majorize_rec(r);
    // Reinsert the dropped vertex as a flat point on its merged side.
    std::vector<SPoint> out(n, SPoint(1, 0, 0));
    for (int a = 0; a < nk; ++a) out[keep[a]] = wr[a];
    for (int a = 0; a < nk; ++a) {
        if (flat_offset[a] < 0.0) continue;
        double total = r.sides[a];
        double frac = (total <= 1e-14) ? 0.0 : flat_offset[a] / total;
        out[drop] = s_geodesic_point(wr[a], wr[(a + 1) % nk], frac);
    }
    return out;
}

}  // namespace detail

// Convex spherical polygon with the same cyclic side lengths, majorizing the
// input; angle persistence flags record which comparison corners are non-flat.
inline std::pair<SphericalPolygon, std::vector<bool>> majorize_spherical_polygon(const SphericalPolygon& p) {
    p.check();
    if (p.perimeter() >= 2 * kPi)
        throw std::invalid_argument("majorization requires perimeter < 2 D_kappa (2 pi on the sphere)");
    const int n = p.size();
    detail::MajorInput in;
    in.sides.resize(n);
    in.labels.resize(n);
    in.dist.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        in.sides[i] = p.side(i);
        in.labels[i] = i;
        for (int j = 0; j < n; ++j) in.dist[i][j] = s_distance(p.vertices[i], p.vertices[j]);
    }
    SphericalPolygon out;
    out.vertices = detail::majorize_rec(in);
    std::vector<bool> persistence(n, false);
    for (int i = 0; i < n; ++i) {
        double prev = s_distance(out.vertices[(i + n - 1) % n], out.vertices[i]);
        double next = s_distance(out.vertices[i], out.vertices[(i + 1) % n]);
        if (prev <= 1e-12 || next <= 1e-12) continue;
        persistence[i] = detail::polygon_interior_angle(out.vertices, i) < kPi - 1e-7;
    }
    return {out, persistence};
}

// ---------------------------------------------------------------------------
// Great-circle deviation
// ---------------------------------------------------------------------------

namespace detail {

// Smallest eigenvector of a symmetric 3x3 matrix by Jacobi rotations.
inline Vec3 smallest_eigenvector(std::array<std::array<double, 3>, 3> a) {
    std::array<std::array<double, 3>, 3> v{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = std::abs(a[0][1]) + std::abs(a[0][2]) + std::abs(a[1][2]);
        if (off < 1e-15) break;
        for (int p = 0; p < 3; ++p)
            for (int q = p + 1; q < 3; ++q) {
                if (std::abs(a[p][q]) < 1e-18) continue;
                double theta = 0.5 * std::atan2(2 * a[p][q], a[q][q] - a[p][p]);
                double c = std::cos(theta), s = std::sin(theta);
                for (int k = 0; k < 3; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < 3; ++k) {
                    double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
    }
    int best = 0;
    for (int i = 1; i < 3; ++i)
        if (a[i][i] < a[best][best]) best = i;
    return Vec3{v[0][best], v[1][best], v[2][best]};
}

}  // namespace detail

// Minimax distance of the vertices to a great circle: min over unit normals n
// of max_i |<v_i, n>|, seeded by the smallest singular direction and refined
// by pattern search.
inline double great_circle_deviation(const SphericalPolygon& p) {
    p.check();
    std::array<std::array<double, 3>, 3> m{{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}};
    for (const auto& v : p.vertices)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m[i][j] += v.c[i] * v.c[j];
    Vec3 n0 = detail::smallest_eigenvector(m);
    SPoint n = detail::s_normalize(n0);
    auto objective = [&](const SPoint& c) {
        double mx = 0.0;
        for (const auto& v : p.vertices) mx = std::max(mx, std::abs(edot(v.c, c.c)));
        return mx;
    };
    double best = objective(n);
    double step = 0.1;
    while (step > 1e-13) {
        bool improved = false;
        Vec3 a = std::abs(n.c[0]) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
        Vec3 t1 = ecross(n.c, a);
        t1 = (1.0 / enorm(t1)) * t1;
        Vec3 t2 = ecross(n.c, t1);
        for (const Vec3& d : {t1, -1.0 * t1, t2, -1.0 * t2}) {
            SPoint trial = s_exp(n, d, step);
            double r = objective(trial);
            if (r < best - 1e-16) {
                best = r;
                n = trial;
                improved = true;
                break;
            }
        }
        if (!improved) step *= 0.5;
    }
    return best;
}

}  // namespace catsurf
