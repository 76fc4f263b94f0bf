#pragma once

// Discrete harmonic maps: minimize the energy sum of squared edge-image
// lengths over equivariant maps, by cyclic per-vertex relaxation or by the
// Moreau-Yosida proximal scheme; certify criticality via the harmonic
// critical inequality residual.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "random.hpp"
#include "surface_complex.hpp"

namespace catsurf {

// ---------------------------------------------------------------------------
// Solver data types
// ---------------------------------------------------------------------------

enum class SolveStatus { Converged, FixedPointConstant, Diverged };

struct SolverParams {
    enum class Method { CoordinateDescent, Proximal };
    Method method = Method::CoordinateDescent;
    std::vector<double> lambda_schedule;  // default: 2^k, k = 0..39
    int outer_cap = 20000;                // sweeps / outer proximal steps
    int inner_cap = 400000;               // local descent iterations per vertex update
    double tol = 1e-9;                    // residual tolerance
    double divergence_radius = 1e4;       // scale factor (floor) of the divergence heuristic
    std::uint64_t seed = 0;

    SolverParams() {
        lambda_schedule.reserve(40);
        double l = 1.0;
        for (int k = 0; k < 40; ++k) {
            lambda_schedule.push_back(l);
            l *= 2.0;
        }
    }
    void check() const {
        if (!(tol > 0)) throw std::invalid_argument("SolverParams: tolerance must be positive");
        for (size_t i = 0; i + 1 < lambda_schedule.size(); ++i)
            if (!(lambda_schedule[i] < lambda_schedule[i + 1]))
                throw std::invalid_argument("SolverParams: lambda schedule must be strictly increasing");
    }
};

struct TraceEntry {
    int iteration = 0;
    double energy = 0.0;
    double max_residual = 0.0;
    double max_displacement = 0.0;
};

struct SolveOutcome {
    EquivariantMap map;
    double energy = 0.0;
    std::vector<double> residual;  // per vertex
    SolveStatus status = SolveStatus::Converged;
    std::vector<TraceEntry> trace;
    std::string note;
    int iterations = 0;
};

// ---------------------------------------------------------------------------
// Energy and residual
// ---------------------------------------------------------------------------

inline double energy(const GainTriangulation& t, const Representation& rep, const EquivariantMap& f) {
    LengthFunction l = length_function_from_map(t, rep, f);
    double e = 0.0;
    for (double x : l.lengths) e += x * x;
    return e;
}

namespace detail {

// Incident-edge structure of one vertex: non-loop terms (fixed neighbor under
// relaxation) and loop terms (both endpoints move with the vertex).
struct VertexTerms {
    struct NonLoop {
        TargetIsometry g;  // neighbor image = g . f(other)
        int other;
    };
    struct Loop {
        TargetIsometry g, g_inv;
    };
    std::vector<NonLoop> nonloops;
    std::vector<Loop> loops;
};

inline std::vector<VertexTerms> build_vertex_terms(const LiftContext& ctx) {
    const GainTriangulation& t = *ctx.t;
    std::vector<VertexTerms> vt(t.num_vertices);
    for (int u = 0; u < t.num_undirected(); ++u) {
        int e = GainTriangulation::forward(u);
        const auto& de = t.edges[e];
        if (de.tail == de.head) {
            vt[de.tail].loops.push_back({ctx.edge_iso[e], ctx.edge_iso[GainTriangulation::partner(e)]});
        } else {
            vt[de.tail].nonloops.push_back({ctx.edge_iso[e], de.head});
            vt[de.head].nonloops.push_back({ctx.edge_iso[GainTriangulation::partner(e)], de.tail});
        }
    }
    return vt;
}

// Local energy of vertex v at trial point z with all other vertices fixed:
// sum over incident non-loop edges of d(z, y_i)^2 plus sum over incident
// loops of d(z, g z)^2, plus an optional proximal anchor weight * d(z, a)^2.
struct LocalObjective {
    const TargetSpace* space;
    const VertexTerms* terms;
    const EquivariantMap* f;
    const TargetPoint* anchor = nullptr;
    double anchor_weight = 0.0;

    double value(const TargetPoint& z) const {
        double s = 0.0;
        for (const auto& nl : terms->nonloops) {
            double d = space->distance(z, space->apply(nl.g, f->images[nl.other]));
            s += d * d;
        }
        for (const auto& lp : terms->loops) {
            double d = space->distance(z, space->apply(lp.g, z));
            s += d * d;
        }
        if (anchor) {
            double d = space->distance(z, *anchor);
            s += anchor_weight * d * d;
        }
        return s;
    }

    // Riemannian gradient at z (H2 only), as a Minkowski tangent vector.
    Vec3 h2_gradient(const TargetPoint& z) const {
        Vec3 g{0, 0, 0};
        auto add = [&](const HPoint& y, double w) {
            double d = h_distance(z.h, y);
            if (d <= 0.0) return;
            g = g - (2.0 * w * d) * h_unit_tangent(z.h, y);
        };
        for (const auto& nl : terms->nonloops) add(space->apply(nl.g, f->images[nl.other]).h, 1.0);
        for (const auto& lp : terms->loops) {
            add(space->apply(lp.g, z).h, 1.0);
            add(space->apply(lp.g_inv, z).h, 1.0);
        }
        if (anchor) add(anchor->h, anchor_weight);
        return g;
    }
};

// Damped Newton minimization on H2: the local problem is 2-dimensional, so
// a finite-difference Hessian of the analytic gradient in an orthonormal
// tangent frame gives fast convergence even when the energy landscape is
// ill-conditioned (near-rigid configurations).
inline void h2_tangent_basis(const HPoint& p, Vec3& t1, Vec3& t2) {
    const Vec3& c = p.c;
    Vec3 a{c[1], c[0], 0.0};  // mdot(a, c) = 0, -mdot(a, a) = c0^2 - c1^2 = 1 + c2^2 > 0
    double n1 = std::sqrt(c[0] * c[0] - c[1] * c[1]);
    t1 = (1.0 / n1) * a;
    t2 = lorentz_cross(c, t1);
    double n2 = std::sqrt(std::max(-mdot(t2, t2), 1e-300));
    t2 = (1.0 / n2) * t2;
}

inline TargetPoint h2_local_minimize(const LocalObjective& obj, TargetPoint z, double grad_tol, int cap) {
    double fz = obj.value(z);
    for (int it = 0; it < cap; ++it) {
        Vec3 g = obj.h2_gradient(z);
        double gn = std::sqrt(std::max(-mdot(g, g), 0.0));
        if (gn <= grad_tol) break;
        Vec3 t1, t2;
        h2_tangent_basis(z.h, t1, t2);
        double g1 = -mdot(g, t1), g2 = -mdot(g, t2);

        // Hessian columns by central differences of the gradient, with the
        // frame projected onto the displaced tangent plane.
        const double h = 1e-6;
        auto grad_coords = [&](const Vec3& dir, double s, double& c1, double& c2) {
            HPoint q = h_exp(z.h, dir, s);
            Vec3 gq = obj.h2_gradient(TargetPoint::h2(q));
            auto proj = [&](const Vec3& w) {
                Vec3 r = w - mdot(w, q.c) * q.c;
                double nn = std::sqrt(std::max(-mdot(r, r), 1e-300));
                return (1.0 / nn) * r;
            };
            c1 = -mdot(gq, proj(t1));
            c2 = -mdot(gq, proj(t2));
        };
        double a1, a2, b1, b2, c1, c2, d1, d2;
        grad_coords(t1, h, a1, a2);
        grad_coords(t1, -h, b1, b2);
        grad_coords(t2, h, c1, c2);
        grad_coords(t2, -h, d1, d2);
        double h11 = (a1 - b1) / (2 * h), h21 = (a2 - b2) / (2 * h);
        double h12 = (c1 - d1) / (2 * h), h22 = (c2 - d2) / (2 * h);
        double hs = 0.5 * (h12 + h21);

        // Levenberg damping until positive definite.
        double scale = std::abs(h11) + std::abs(h22) + std::abs(hs) + 1.0;
        double mu = 0.0;
        for (int k = 0; k < 60; ++k) {
            double e11 = h11 + mu, e22 = h22 + mu;
            if (e11 > 0.0 && e11 * e22 - hs * hs > 1e-12 * scale * scale) break;
            mu = (mu == 0.0) ? 1e-6 * scale : mu * 10.0;
        }
        double e11 = h11 + mu, e22 = h22 + mu;
        double det = e11 * e22 - hs * hs;
        double p1 = (-g1 * e22 + g2 * hs) / det;
        double p2 = (-g2 * e11 + g1 * hs) / det;
        double pn = std::hypot(p1, p2);
        if (!(pn > 0.0) || !std::isfinite(pn)) break;
        double slope = g1 * p1 + g2 * p2;  // < 0 by positive definiteness
        // Trust-region cap: in nearly flat directions (infimum approached
        // only at infinity) the Newton step is unbounded and h_exp would
        // overflow; divergence is then detected by the outer radius check.
        const double step_cap = 10.0;
        if (pn > step_cap) {
            slope *= step_cap / pn;
            p1 *= step_cap / pn;
            p2 *= step_cap / pn;
            pn = step_cap;
        }
        Vec3 dir = (p1 / pn) * t1 + (p2 / pn) * t2;

        // The objective value carries cancellation noise of order 1e-12 * fz
        // (Minkowski products of far apart lifted images); once the predicted
        // decrease drops below that, Armijo would accept arbitrarily tiny --
        // even zero-length -- steps and spin without progress.  Require a
        // decrease above the noise floor, else defer to the gradient test.
        const double fnoise = 1e-12 * (1.0 + std::abs(fz));
        bool accepted = false;
        double s = 1.0;
        for (int bt = 0; bt < 60; ++bt) {
            TargetPoint trial = TargetPoint::h2(h_exp(z.h, dir, s * pn));
            double ft = obj.value(trial);
            if (ft <= fz + 1e-4 * s * slope && fz - ft > fnoise) {
                z = trial;
                fz = ft;
                accepted = true;
                break;
            }
            s *= 0.5;
        }
        if (!accepted) {
            // Near the minimum the objective decrease per Newton step drops
            // below the rounding noise of the objective value and Armijo
            // cannot certify progress.  The analytic gradient is far less
            // noisy, so fall back to Newton as a root-finder on the
            // gradient: accept the full step if it shrinks the gradient.
            TargetPoint trial = TargetPoint::h2(h_exp(z.h, dir, pn));
            Vec3 gt = obj.h2_gradient(trial);
            double gnt = std::sqrt(std::max(-mdot(gt, gt), 0.0));
            if (!(gnt < 0.9 * gn)) break;  // numerically stationary
            z = trial;
            fz = obj.value(z);
        }
    }
    return z;
}

// Exact convex minimization on the tree by walking edge segments; ties are
// broken toward the current point (the walk stops at the first minimizer).
inline TargetPoint tree_local_minimize(const LocalObjective& obj, TargetPoint z, int cap) {
    const TreeSpace& tree = obj.space->tree;
    double fz = obj.value(z);
    const double improve_eps = 1e-14;
    for (int it = 0; it < cap; ++it) {
        bool moved = false;
        const TreePoint& p = z.t;
        // Candidate germ segments from z to the next vertex.
        std::vector<std::pair<TreePoint, double>> segments;  // (far endpoint as direction, length)
        if (p.is_vertex()) {
            for (int k = 1; k <= tree.rank; ++k) {
                for (int s : {k, -k}) {
                    Word far = p.base;
                    push_reduced(far, s);
                    segments.push_back({TreePoint(tree, far, 0, 0.0), tree.length(k)});
                }
            }
        } else {
            double len = tree.length(p.dir);
            segments.push_back({TreePoint(tree, p.base, 0, 0.0), p.offset});
            segments.push_back({TreePoint(tree, concat_words(p.base, Word{p.dir}), 0, 0.0), len - p.offset});
        }
        for (const auto& [far, seglen] : segments) {
            if (seglen <= 0.0) continue;
            auto at = [&](double s) { return TargetPoint::tree(tree_geodesic_at_arclength(tree, p, far, s)); };
            // Ternary search on the convex restriction to [0, seglen]; ties
            // shrink from the far end so the leftmost minimizer is kept.
            double lo = 0.0, hi = seglen;
            double fbest = fz;
            double sbest = 0.0;
            for (int k = 0; k < 200 && hi - lo > 1e-15 * std::max(1.0, seglen); ++k) {
                double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
                double f1 = obj.value(at(m1)), f2 = obj.value(at(m2));
                if (f1 <= f2)
                    hi = m2;
                else
                    lo = m1;
                if (f1 < fbest) {
                    fbest = f1;
                    sbest = m1;
                }
                if (f2 < fbest) {
                    fbest = f2;
                    sbest = m2;
                }
            }
            double fend = obj.value(at(seglen));
            if (fend < fbest) {
                fbest = fend;
                sbest = seglen;
            }
            if (fbest < fz - improve_eps) {
                z = at(sbest);
                fz = fbest;
                moved = true;
                break;
            }
        }
        if (!moved) break;
    }
    return z;
}

inline TargetPoint local_minimize(const LocalObjective& obj, const TargetPoint& z, double grad_tol, int cap) {
    if (obj.space->kind == TargetKind::H2) return h2_local_minimize(obj, z, grad_tol, cap);
    return tree_local_minimize(obj, z, cap);
}

}  // namespace detail

// Exact violation bound of the harmonic critical inequality at each vertex:
// H2: |sum_i d_i u_i| in the tangent plane at F(x); tree: max over germs of
// the signed sum, clamped at 0.
inline std::vector<double> critical_residual(const GainTriangulation& t, const Representation& rep,
                                             const EquivariantMap& f) {
    LiftContext ctx(t, rep);
    const TargetSpace& space = rep.target;
    std::vector<double> out(t.num_vertices, 0.0);
    for (int v = 0; v < t.num_vertices; ++v) {
        // Edge ends at v: all directed edges with tail v.
        std::vector<TargetPoint> ys;
        std::vector<double> ds;
        for (int e = 0; e < t.num_directed(); ++e) {
            if (t.edges[e].tail != v) continue;
            TargetPoint y = ctx.neighbor_image(f, e);
            double d = space.distance(f.images[v], y);
            if (d > 0.0) {
                ys.push_back(y);
                ds.push_back(d);
            }
        }
        if (ys.empty()) {
            out[v] = 0.0;
            continue;
        }
        if (space.kind == TargetKind::H2) {
            Vec3 s{0, 0, 0};
            for (size_t i = 0; i < ys.size(); ++i) s = s + ds[i] * h_unit_tangent(f.images[v].h, ys[i].h);
            double n2 = -mdot(s, s);
            out[v] = (n2 > 0.0) ? std::sqrt(n2) : 0.0;
        } else {
            const TreeSpace& tree = space.tree;
            const TreePoint& p = f.images[v].t;
            std::vector<int> germs;
            if (p.is_vertex()) {
                for (int k = 1; k <= tree.rank; ++k) {
                    germs.push_back(k);
                    germs.push_back(-k);
                }
            } else {
                germs.push_back(+1);
                germs.push_back(-1);
            }
            std::vector<int> toward(ys.size());
            for (size_t i = 0; i < ys.size(); ++i) toward[i] = tree_germ(tree, p, ys[i].t);
            double best = 0.0;
            for (int g : germs) {
                double s = 0.0;
                for (size_t i = 0; i < ys.size(); ++i) s += ds[i] * (toward[i] == g ? 1.0 : -1.0);
                best = std::max(best, s);
            }
            out[v] = best;
        }
    }
    return out;
}

// One monotone relaxation step for a single vertex against a fixed list of
// neighbor images (with multiplicity): returns a point z with
// sum d(z, y_i)^2 <= the value at `current`.
inline TargetPoint vertex_barycenter_step(const TargetSpace& space, const TargetPoint& current,
                                          const std::vector<TargetPoint>& neighbors) {
    if (neighbors.empty()) throw std::invalid_argument("vertex_barycenter_step: empty neighbor list");
    detail::VertexTerms terms;
    EquivariantMap fixed;
    fixed.images = neighbors;
    for (int i = 0; i < static_cast<int>(neighbors.size()); ++i)
        terms.nonloops.push_back({TargetIsometry::identity(space.kind), i});
    detail::LocalObjective obj{&space, &terms, &fixed, nullptr, 0.0};
    return detail::local_minimize(obj, current, 1e-12, 100000);
}

// ---------------------------------------------------------------------------
// solve_harmonic
// ---------------------------------------------------------------------------

inline EquivariantMap random_equivariant_init(const GainTriangulation& t, const Representation& rep,
                                              std::uint64_t seed) {
    RandomStream rng(seed);
    EquivariantMap f;
    f.images.reserve(t.num_vertices);
    for (int v = 0; v < t.num_vertices; ++v) {
        if (rep.target.kind == TargetKind::H2) {
            double r = rng.uniform(0.0, 0.8);
            double th = rng.uniform(0.0, 2 * kPi);
            f.images.push_back(TargetPoint::h2(HPoint(std::cosh(r), std::sinh(r) * std::cos(th), std::sinh(r) * std::sin(th))));
        } else {
            const TreeSpace& tree = rep.target.tree;
            int depth = rng.uniform_int(3);
            Word w;
            for (int i = 0; i < depth; ++i) {
                int k = 1 + rng.uniform_int(tree.rank);
                push_reduced(w, rng.uniform() < 0.5 ? k : -k);
            }
            f.images.push_back(TargetPoint::tree(TreePoint(tree, w, 0, 0.0)));
        }
    }
    return f;
}

inline SolveOutcome solve_harmonic(const GainTriangulation& t, const Representation& rep,
                                   const EquivariantMap& init, const SolverParams& params) {
    params.check();
    auto diag = validate(t);
    if (!diag.ok()) throw std::invalid_argument("solve_harmonic: invalid triangulation: " + diag.violations.front());
    if (static_cast<int>(init.images.size()) != t.num_vertices)
        throw std::invalid_argument("solve_harmonic: init map has wrong vertex count");

    const TargetSpace& space = rep.target;
    LiftContext ctx(t, rep);
    auto vterms = detail::build_vertex_terms(ctx);

    EquivariantMap f = init;
    const EquivariantMap f0 = init;

    // Divergence heuristic: radius = factor * max(initial diameter, 1).
    double init_diam = 0.0;
    for (int i = 0; i < t.num_vertices; ++i)
        for (int j = i + 1; j < t.num_vertices; ++j)
            init_diam = std::max(init_diam, space.distance(f0.images[i], f0.images[j]));
    // H2 points at radius r have Minkowski coordinates ~cosh(r); the sheet
    // constraint t^2-x^2-y^2=1 is verified with absolute error ~e^{2r}*eps,
    // which swamps the constraint itself near r ~ 18.  The divergence
    // verdict must fire while points are still representable, leaving
    // headroom for the escape probe's pushes beyond the recorded radius.
    double radius = params.divergence_radius * std::max(init_diam, 1.0);
    if (space.kind == TargetKind::H2) radius = std::min(radius, 12.0);

    SolveOutcome out;
    auto displacement = [&]() {
        double m = 0.0;
        for (int v = 0; v < t.num_vertices; ++v) m = std::max(m, space.distance(f.images[v], f0.images[v]));
        return m;
    };
    auto record = [&](int iter) {
        double e = energy(t, rep, f);
        auto res = critical_residual(t, rep, f);
        double mr = 0.0;
        for (double r : res) mr = std::max(mr, r);
        out.trace.push_back({iter, e, mr, displacement()});
        return mr;
    };

    auto finish = [&](SolveStatus status, int iters, const std::string& note) {
        out.map = f;
        out.energy = energy(t, rep, f);
        out.residual = critical_residual(t, rep, f);
        out.status = status;
        out.iterations = iters;
        out.note = note;
        if (status == SolveStatus::Converged && out.energy < 1e-16) out.status = SolveStatus::FixedPointConstant;
        return out;
    };

    auto sweep = [&](const EquivariantMap* anchor, double inv_lambda) {
        for (int v = 0; v < t.num_vertices; ++v) {
            detail::LocalObjective obj{&space, &vterms[v], &f, nullptr, 0.0};
            if (anchor) {
                obj.anchor = &anchor->images[v];
                obj.anchor_weight = inv_lambda;
            }
            int budget = std::min(params.inner_cap, space.kind == TargetKind::H2 ? 60 : 2000);
            f.images[v] = detail::local_minimize(obj, f.images[v], 0.1 * params.tol, budget);
        }
    };

    // Evanescent actions reach any residual tolerance at finite displacement
    // (the gradient decays exponentially along the escape), so a residual
    // check alone cannot tell an attained minimum from an escaping sequence.
    // At a residual-converged map, probe coarse pushes of each vertex: a
    // certified energy decrease proves the map is not a local minimum and
    // the solve continues from the improved configuration.
    bool escape_seen = false;
    const double escape_disp = std::min(10.0 * std::max(init_diam, 1.0), 0.75 * radius);
    auto escape_probe = [&]() {
        if (space.kind != TargetKind::H2) return false;
        bool moved = false;
        for (int v = 0; v < t.num_vertices; ++v) {
            detail::LocalObjective obj{&space, &vterms[v], &f, nullptr, 0.0};
            double fz = obj.value(f.images[v]);
            Vec3 t1, t2;
            detail::h2_tangent_basis(f.images[v].h, t1, t2);
            const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
            std::array<Vec3, 8> dirs{t1,
                                     (-1.0) * t1,
                                     t2,
                                     (-1.0) * t2,
                                     inv_sqrt2 * (t1 + t2),
                                     (-inv_sqrt2) * (t1 + t2),
                                     inv_sqrt2 * (t1 - t2),
                                     (-inv_sqrt2) * (t1 - t2)};
            bool vertex_moved = false;
            for (double step : {1.0, 2.0, 4.0}) {
                for (const Vec3& dir : dirs) {
                    TargetPoint zp = TargetPoint::h2(h_exp(f.images[v].h, dir, step));
                    if (obj.value(zp) < fz - 1e-10 * (1.0 + fz)) {
                        f.images[v] = detail::local_minimize(obj, zp, 0.1 * params.tol, 60);
                        vertex_moved = moved = true;
                        break;
                    }
                }
                if (vertex_moved) break;
            }
        }
        if (moved) escape_seen = true;
        return moved;
    };
    // True on a genuinely converged map; false restarts the outer loop from
    // the configuration improved by the probe.
    auto confirm_converged = [&]() { return !escape_probe(); };

    auto converged_exit = [&](int it) {
        if (escape_seen && displacement() > escape_disp)
            return finish(SolveStatus::Diverged, it,
                          "descent persists beyond the residual tolerance along an escaping sequence (evanescent "
                          "action); infimum not attained");
        return finish(SolveStatus::Converged, it, "");
    };

    if (params.method == SolverParams::Method::CoordinateDescent) {
        double mr = record(0);
        if (mr <= params.tol && confirm_converged()) return converged_exit(0);
        for (int it = 1; it <= params.outer_cap; ++it) {
            sweep(nullptr, 0.0);
            mr = record(it);
            if (displacement() > radius)
                return finish(SolveStatus::Diverged, it, "image left the divergence radius (evanescence heuristic)");
            if (mr <= params.tol && confirm_converged()) return converged_exit(it);
        }
        return finish(SolveStatus::Diverged, params.outer_cap,
                      "iteration cap exceeded without meeting tolerance (final residual in trace)");
    }

    // Moreau-Yosida proximal: x_{k+1} = argmin( lambda_k E(y) + sum_v d(x_k(v), y(v))^2 ),
    // inner solves by cyclic relaxation on the scaled objective E + (1/lambda) d^2.
    double mr = record(0);
    if (mr <= params.tol && confirm_converged()) return converged_exit(0);
    int iter = 0;
    for (double lambda : params.lambda_schedule) {
        EquivariantMap anchor = f;
        const int inner_sweeps = 60;
        for (int s = 0; s < inner_sweeps; ++s) {
            EquivariantMap before = f;
            sweep(&anchor, 1.0 / lambda);
            double move = 0.0;
            for (int v = 0; v < t.num_vertices; ++v)
                move = std::max(move, space.distance(before.images[v], f.images[v]));
            if (move <= 1e-13) break;
        }
        ++iter;
        mr = record(iter);
        if (displacement() > radius)
            return finish(SolveStatus::Diverged, iter, "image left the divergence radius (evanescence heuristic)");
        if (mr <= params.tol && confirm_converged()) return converged_exit(iter);
    }
    if (mr <= params.tol) return converged_exit(iter);
    return finish(SolveStatus::Diverged, iter,
                  "proximal schedule exhausted without meeting tolerance (final residual in trace)");
}

inline SolveOutcome solve_harmonic(const GainTriangulation& t, const Representation& rep,
                                   const SolverParams& params) {
    return solve_harmonic(t, rep, random_equivariant_init(t, rep, params.seed), params);
}

}  // namespace catsurf
