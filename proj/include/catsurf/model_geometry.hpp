#pragma once

// Exact-formula kernels for the model planes M_kappa (kappa = -1, 0, 1):
// hyperboloid-model hyperbolic plane, Euclidean plane (implicit, via the law
// of cosines only), and the unit sphere.  Distances, geodesics, angles, laws
// of cosines, comparison triangles.

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace catsurf {

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Small 3-vector / 3x3-matrix utilities
// ---------------------------------------------------------------------------

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

// Euclidean dot / cross / norm.
inline double edot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline Vec3 ecross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double enorm(const Vec3& a) { return std::sqrt(edot(a, a)); }

// Minkowski form of signature (+,-,-) and the Lorentz cross product
// (the Minkowski-orthogonal complement of a 2-plane).
inline double mdot(const Vec3& a, const Vec3& b) { return a[0] * b[0] - a[1] * b[1] - a[2] * b[2]; }
inline Vec3 lorentz_cross(const Vec3& a, const Vec3& b) {
    Vec3 c = ecross(a, b);
    return {c[0], -c[1], -c[2]};
}

struct Mat3 {
    // Row-major entries.
    std::array<std::array<double, 3>, 3> m{};

    static Mat3 identity() {
        Mat3 r;
        r.m = {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
        return r;
    }
    double& operator()(int i, int j) { return m[i][j]; }
    double operator()(int i, int j) const { return m[i][j]; }
};

inline Mat3 operator*(const Mat3& a, const Mat3& b) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double s = 0;
            for (int k = 0; k < 3; ++k) s += a(i, k) * b(k, j);
            r(i, j) = s;
        }
    return r;
}

inline Vec3 operator*(const Mat3& a, const Vec3& v) {
    Vec3 r;
    for (int i = 0; i < 3; ++i) r[i] = a(i, 0) * v[0] + a(i, 1) * v[1] + a(i, 2) * v[2];
    return r;
}

inline Mat3 transpose(const Mat3& a) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r(i, j) = a(j, i);
    return r;
}

inline double clamp(double x, double lo, double hi) { return x < lo ? lo : (x > hi ? hi : x); }

// ---------------------------------------------------------------------------
// Points
// ---------------------------------------------------------------------------

// Point of H^2 on the upper sheet t^2 - x^2 - y^2 = 1, t > 0.
struct HPoint {
    Vec3 c{1.0, 0.0, 0.0};

    HPoint() = default;
    explicit HPoint(const Vec3& v) : c(v) { renormalize(); }
    HPoint(double t, double x, double y) : c{t, x, y} { renormalize(); }

    // Project back to the sheet; keeps 1-ulp excursions from accumulating.
    void renormalize() {
        double q = mdot(c, c);
        if (!(q > 0.0) || c[0] <= 0.0) throw std::invalid_argument("HPoint: not a timelike upper-sheet vector");
        double s = 1.0 / std::sqrt(q);
        c = s * c;
    }
};

// Point of the unit sphere S^2.
struct SPoint {
    Vec3 c{1.0, 0.0, 0.0};

    SPoint() = default;
    explicit SPoint(const Vec3& v) : c(v) { renormalize(); }
    SPoint(double x, double y, double z) : c{x, y, z} { renormalize(); }

    void renormalize() {
        double n = enorm(c);
        if (!(n > 0.0)) throw std::invalid_argument("SPoint: zero vector");
        c = (1.0 / n) * c;
    }
};

// ---------------------------------------------------------------------------
// Hyperbolic plane operations
// ---------------------------------------------------------------------------

inline double h_distance(const HPoint& p, const HPoint& q) {
    // d = 2 asinh(|p - q|_M / 2) with |w|_M^2 = -<w,w>: exact identity
    // -<p-q, p-q> = 4 sinh^2(d/2), and accurate near d = 0 where
    // acosh(<p,q>) loses half the significant digits.
    Vec3 w = p.c - q.c;
    double n2 = -mdot(w, w);
    if (n2 < 0.0) n2 = 0.0;  // clamp: 1-ulp excursions at coincident points
    return 2.0 * std::asinh(0.5 * std::sqrt(n2));
}

// Unit tangent at p pointing toward q.  Requires p != q.
inline Vec3 h_unit_tangent(const HPoint& p, const HPoint& q) {
    double d = h_distance(p, q);
    if (d <= 0.0) throw std::invalid_argument("h_unit_tangent: undefined direction (coincident points)");
    Vec3 w = q.c - std::cosh(d) * p.c;
    double n2 = -mdot(w, w);
    if (n2 <= 0.0) throw std::invalid_argument("h_unit_tangent: degenerate tangent");
    return (1.0 / std::sqrt(n2)) * w;
}

// Geodesic from p with unit tangent u, at arclength s.
inline HPoint h_exp(const HPoint& p, const Vec3& u, double s) {
    return HPoint(std::cosh(s) * p.c + std::sinh(s) * u);
}

inline HPoint h_geodesic_point(const HPoint& p, const HPoint& q, double t) {
    double d = h_distance(p, q);
    if (d <= 0.0) return p;
    return h_exp(p, h_unit_tangent(p, q), t * d);
}

// Angle at `apex` between the geodesics toward u and toward v, in [0, pi].
inline double h_angle(const HPoint& apex, const HPoint& u, const HPoint& v) {
    Vec3 tu = h_unit_tangent(apex, u);
    Vec3 tv = h_unit_tangent(apex, v);
    // Tangent vectors are unit spacelike; the Riemannian inner product on the
    // tangent plane is the negated Minkowski form.
    return std::acos(clamp(-mdot(tu, tv), -1.0, 1.0));
}

// ---------------------------------------------------------------------------
// Sphere operations
// ---------------------------------------------------------------------------

inline double s_distance(const SPoint& p, const SPoint& q) {
    return std::acos(clamp(edot(p.c, q.c), -1.0, 1.0));
}

inline Vec3 s_unit_tangent(const SPoint& p, const SPoint& q) {
    Vec3 w = q.c - edot(p.c, q.c) * p.c;
    double n = enorm(w);
    if (n <= 0.0) throw std::invalid_argument("s_unit_tangent: undefined direction");
    return (1.0 / n) * w;
}

inline SPoint s_exp(const SPoint& p, const Vec3& u, double s) {
    return SPoint(std::cos(s) * p.c + std::sin(s) * u);
}

inline SPoint s_geodesic_point(const SPoint& p, const SPoint& q, double t) {
    double d = s_distance(p, q);
    if (d <= 0.0) return p;
    if (d >= kPi - 1e-14) throw std::invalid_argument("s_geodesic_point: non-unique geodesic (antipodal pair)");
    return s_exp(p, s_unit_tangent(p, q), t * d);
}

inline double s_angle(const SPoint& apex, const SPoint& u, const SPoint& v) {
    Vec3 tu = s_unit_tangent(apex, u);
    Vec3 tv = s_unit_tangent(apex, v);
    return std::acos(clamp(edot(tu, tv), -1.0, 1.0));
}

// ---------------------------------------------------------------------------
// Isometries of H^2
// ---------------------------------------------------------------------------

// Isometry of H^2 as a 3x3 matrix preserving the Minkowski form and the
// upper sheet.
struct HIsometry {
    Mat3 m = Mat3::identity();

    // Optional SL(2,R) lift.  Entries of the 3x3 adjoint matrix grow like
    // e^d while the 2x2 lift grows like e^{d/2}, so long products composed
    // through the lift lose roughly half as many digits; kept whenever both
    // factors carry one (compositions with frame-built isometries fall back
    // to the 3x3 product).
    bool has_sl2 = false;
    double sa = 1.0, sb = 0.0, sc = 0.0, sd = 1.0;

    static HIsometry identity() {
        HIsometry r;
        r.has_sl2 = true;
        return r;
    }

    HPoint apply(const HPoint& p) const {
        if (has_sl2) {
            // Adjoint action on X = [[t+x, y], [y, t-x]]: X' = A X A^T.
            // Intermediate magnitudes grow like |A| instead of |A|^2, which
            // keeps points applied far from the origin accurate.
            double t = p.c[0], x = p.c[1], y = p.c[2];
            double x00 = t + x, x01 = y, x11 = t - x;
            double b00 = sa * x00 + sb * x01, b01 = sa * x01 + sb * x11;
            double b10 = sc * x00 + sd * x01, b11 = sc * x01 + sd * x11;
            double c00 = b00 * sa + b01 * sb;
            double c01 = b00 * sc + b01 * sd;
            double c10 = b10 * sa + b11 * sb;
            double c11 = b10 * sc + b11 * sd;
            return HPoint{{(c00 + c11) / 2, (c00 - c11) / 2, (c01 + c10) / 2}};
        }
        return HPoint(m * p.c);
    }

    HIsometry compose(const HIsometry& other) const {
        if (has_sl2 && other.has_sl2) {
            double a = sa * other.sa + sb * other.sc, b = sa * other.sb + sb * other.sd;
            double c = sc * other.sa + sd * other.sc, d = sc * other.sb + sd * other.sd;
            double det = a * d - b * c;  // = 1 up to rounding; renormalize to stop drift
            double s = 1.0 / std::sqrt(det);
            return from_sl2(a * s, b * s, c * s, d * s);
        }
        HIsometry r;
        r.m = m * other.m;
        return r;
    }

    // Inverse via M^{-1} = J M^T J for M in O(2,1).
    HIsometry inverse() const {
        if (has_sl2) return from_sl2(sd, -sb, -sc, sa);
        Mat3 t = transpose(m);
        Mat3 r = t;
        // J M^T J with J = diag(1,-1,-1): flips sign of (0,j) and (i,0) off-diagonal blocks.
        r(0, 1) = -t(0, 1);
        r(0, 2) = -t(0, 2);
        r(1, 0) = -t(1, 0);
        r(2, 0) = -t(2, 0);
        HIsometry out;
        out.m = r;
        return out;
    }

    // Max entrywise violation of M^T J M = J.
    double form_violation() const {
        Mat3 t = transpose(m);
        Mat3 jm = m;
        for (int j = 0; j < 3; ++j) {
            jm(1, j) = -jm(1, j);
            jm(2, j) = -jm(2, j);
        }
        Mat3 g = t * jm;  // = M^T J M
        double err = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                double want = (i == j) ? (i == 0 ? 1.0 : -1.0) : 0.0;
                err = std::max(err, std::abs(g(i, j) - want));
            }
        return err;
    }

    bool is_valid(double tol = 1e-9) const { return form_violation() <= tol && m(0, 0) > 0.0; }

    // Conversion from a 2x2 real matrix of determinant 1 acting on
    // X = [[t+x, y], [y, t-x]] by A X A^T (the adjoint action on the
    // Minkowski representation).
    static HIsometry from_sl2(double a, double b, double c, double d, double det_tol = 1e-9) {
        double det = a * d - b * c;
        if (std::abs(det - 1.0) > det_tol) throw std::invalid_argument("from_sl2: determinant must be 1");
        HIsometry r;
        r.m.m = {{{(a * a + b * b + c * c + d * d) / 2, (a * a - b * b + c * c - d * d) / 2, a * b + c * d},
                  {(a * a + b * b - c * c - d * d) / 2, (a * a - b * b - c * c + d * d) / 2, a * b - c * d},
                  {a * c + b * d, a * c - b * d, a * d + b * c}}};
        r.has_sl2 = true;
        r.sa = a;
        r.sb = b;
        r.sc = c;
        r.sd = d;
        return r;
    }
};

// Orthonormal Minkowski frame [p, u, n] at p with first tangent direction
// toward q; the third column is the Lorentz cross product.
inline Mat3 h_frame(const HPoint& p, const HPoint& q) {
    Vec3 u = h_unit_tangent(p, q);
    Vec3 n = lorentz_cross(p.c, u);
    double n2 = -mdot(n, n);
    n = (1.0 / std::sqrt(n2)) * n;
    Mat3 f;
    for (int i = 0; i < 3; ++i) {
        f(i, 0) = p.c[i];
        f(i, 1) = u[i];
        f(i, 2) = n[i];
    }
    return f;
}

// The boost mapping p to the origin (1,0,0).  Built directly in SL(2,R):
// with X_p = [[t+x, y], [y, t-x]], the unique positive boost with
// S (origin) = p is S = (X_p + I)/sqrt(2t+2) (a det-1 symmetric square
// root of X_p); the recentering isometry is S^{-1}.  Carrying the SL2 lift
// keeps applications to far-out points accurate, unlike a frame-built 3x3.
inline HIsometry h_recenter_isometry(const HPoint& p) {
    double t = p.c[0], x = p.c[1], y = p.c[2];
    double s = std::sqrt(2.0 * t + 2.0);
    double a = (t + x + 1.0) / s, b = y / s, d = (t - x + 1.0) / s;
    return HIsometry::from_sl2(d, -b, -b, a);
}

// The isometry mapping p to the origin and q onto the positive-x geodesic
// ray; composed from the recentering boost and a rotation, both carrying
// SL2 lifts.  (A hyperboloid rotation by theta lifts to the SL2 rotation
// by theta/2 under the adjoint action.)
inline HIsometry h_align_segment(const HPoint& p, const HPoint& q) {
    HIsometry s = h_recenter_isometry(p);
    HPoint q0 = s.apply(q);
    double th = std::atan2(q0.c[2], q0.c[1]);
    double ca = std::cos(0.5 * th), sa = std::sin(0.5 * th);
    return HIsometry::from_sl2(ca, sa, -sa, ca).compose(s);
}

// The unique orientation-preserving isometry sending the segment (p, q) onto
// (p2, q2); requires d(p,q) = d(p2,q2) for an exact isometry.
inline HIsometry h_isometry_from_segments(const HPoint& p, const HPoint& q, const HPoint& p2, const HPoint& q2) {
    return h_align_segment(p2, q2).inverse().compose(h_align_segment(p, q));
}

// ---------------------------------------------------------------------------
// Triangle shapes, laws of cosines, comparison triangles
// ---------------------------------------------------------------------------

struct TriangleShape {
    int kappa = -1;                    // curvature label: -1, 0, or 1
    std::array<double, 3> sides{};     // (a, b, c), angle i is opposite side i

    bool sides_nonnegative() const { return sides[0] >= 0 && sides[1] >= 0 && sides[2] >= 0; }
    double perimeter() const { return sides[0] + sides[1] + sides[2]; }
    // Minimal slack of the cyclic triangle inequalities.
    double min_slack() const {
        double s0 = sides[1] + sides[2] - sides[0];
        double s1 = sides[2] + sides[0] - sides[1];
        double s2 = sides[0] + sides[1] - sides[2];
        return std::min({s0, s1, s2});
    }
    bool valid(double tol = 1e-10) const {
        if (kappa != -1 && kappa != 0 && kappa != 1) return false;
        if (!sides_nonnegative()) return false;
        if (min_slack() < -tol) return false;
        if (kappa == 1 && perimeter() >= 2 * kPi) return false;
        return true;
    }
};

struct TriangleAngles {
    std::array<double, 3> angles{};  // angle i opposite side i
    bool flat = false;
};

// Interior angle between sides a and b (opposite side c) of the comparison
// triangle in M_kappa.
inline double comparison_angle(int kappa, double a, double b, double c) {
    if (a <= 0.0 || b <= 0.0) throw std::invalid_argument("comparison_angle: zero adjacent side");
    double cosv;
    if (kappa == -1) {
        cosv = (std::cosh(a) * std::cosh(b) - std::cosh(c)) / (std::sinh(a) * std::sinh(b));
    } else if (kappa == 0) {
        cosv = (a * a + b * b - c * c) / (2 * a * b);
    } else if (kappa == 1) {
        if (a + b + c >= 2 * kPi) throw std::invalid_argument("comparison_angle: no comparison triangle (perimeter >= 2 pi)");
        cosv = (std::cos(c) - std::cos(a) * std::cos(b)) / (std::sin(a) * std::sin(b));
    } else {
        throw std::invalid_argument("comparison_angle: kappa must be -1, 0 or 1");
    }
    return std::acos(clamp(cosv, -1.0, 1.0));
}

// Angles of a model triangle, with the flat degenerate case flagged: a flat
// triangle gets angle pi at the vertex opposite its longest side, 0 at the
// other two.
inline TriangleAngles triangle_angles(const TriangleShape& shape, double flat_tol = 1e-12) {
    if (!shape.valid(std::max(flat_tol, 1e-10)))
        throw std::invalid_argument("triangle_angles: invalid TriangleShape");
    const auto& s = shape.sides;
    double scale = std::max(1.0, shape.perimeter());
    TriangleAngles out;
    if (shape.min_slack() <= flat_tol * scale) {
        out.flat = true;
        int longest = 0;
        if (s[1] > s[longest]) longest = 1;
        if (s[2] > s[longest]) longest = 2;
        out.angles = {0.0, 0.0, 0.0};
        out.angles[longest] = kPi;
        return out;
    }
    // Non-flat: every side positive (a zero side forces a degenerate slack).
    out.angles[0] = comparison_angle(shape.kappa, s[1], s[2], s[0]);
    out.angles[1] = comparison_angle(shape.kappa, s[2], s[0], s[1]);
    out.angles[2] = comparison_angle(shape.kappa, s[0], s[1], s[2]);
    return out;
}

// Canonical embedding of a hyperbolic comparison triangle with pairwise
// distances |v0 v1| = sides[0], |v0 v2| = sides[1], |v1 v2| = sides[2]:
// vertex0 at (1,0,0), vertex1 on the positive-x geodesic, vertex2 in the
// upper half (nonnegative y).  Flat shapes embed on a single geodesic.
inline std::array<HPoint, 3> embed_comparison_triangle(const TriangleShape& shape) {
    if (shape.kappa != -1) throw std::invalid_argument("embed_comparison_triangle: kappa must be -1");
    if (!shape.valid()) throw std::invalid_argument("embed_comparison_triangle: invalid shape");
    const auto& s = shape.sides;
    HPoint v0(1.0, 0.0, 0.0);
    HPoint v1(std::cosh(s[0]), std::sinh(s[0]), 0.0);
    double b = s[1];  // |v0 v2|
    if (b <= 0.0) return {v0, v1, v0};
    // Angle at v0 between [v0 v1] and [v0 v2], i.e. between sides s[0], s[1],
    // opposite side s[2].  With v0 = v1 the direction convention is +x.
    double alpha = (s[0] <= 0.0) ? 0.0 : comparison_angle(-1, s[0], s[1], s[2]);
    HPoint v2(std::cosh(b), std::sinh(b) * std::cos(alpha), std::sinh(b) * std::sin(alpha));
    return {v0, v1, v2};
}

// Spherical analogue with the same side convention: vertex0 at (0,0,1),
// vertex1 along the x-z great circle, vertex2 with nonnegative y direction.
inline std::array<SPoint, 3> embed_spherical_triangle(const TriangleShape& shape) {
    if (shape.kappa != 1) throw std::invalid_argument("embed_spherical_triangle: kappa must be 1");
    if (!shape.valid()) throw std::invalid_argument("embed_spherical_triangle: invalid shape");
    const auto& s = shape.sides;
    SPoint v0(0.0, 0.0, 1.0);
    SPoint v1(std::sin(s[0]), 0.0, std::cos(s[0]));
    double b = s[1];
    if (b <= 0.0) return {v0, v1, v0};
    double alpha = (s[0] <= 0.0) ? 0.0 : comparison_angle(1, s[0], s[1], s[2]);
    SPoint v2(std::sin(b) * std::cos(alpha), std::sin(b) * std::sin(alpha), std::cos(b));
    return {v0, v1, v2};
}

}  // namespace catsurf
