#pragma once

// Configuration ingestion, pipeline orchestration (solve -> build -> certify
// -> desingularize-or-rigidity -> domination report), and deterministic JSON
// reporting.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "conical_builder.hpp"
#include "desingularizer.hpp"
#include "fixtures.hpp"
#include "harmonic_solver.hpp"
#include "rigidity.hpp"

namespace catsurf {

using ordered_json = nlohmann::ordered_json;

inline constexpr const char* kVersion = "1.0.0";

struct PipelineConfig {
    std::string name = "custom";
    int genus = 2;
    std::string triangulation = "riemann";
    FixtureData rep_data;  // target + representation description
    SolverParams solver;
    int sampling_pairs = 2000;
    std::uint64_t sampling_seed = 1;
    double rigidity_tol = 1e-6;
    bool emit_timing = false;
};

// ---------------------------------------------------------------------------
// Config (de)serialization
// ---------------------------------------------------------------------------

inline ordered_json config_to_json(const PipelineConfig& cfg) {
    ordered_json j;
    j["name"] = cfg.name;
    j["genus"] = cfg.genus;
    j["triangulation"] = cfg.triangulation;
    if (cfg.rep_data.target == TargetKind::H2) {
        j["target"] = {{"kind", "h2"}};
        ordered_json mats = ordered_json::array();
        for (const auto& m : cfg.rep_data.matrices)
            mats.push_back(ordered_json::array({ordered_json::array({m.a, m.b}), ordered_json::array({m.c, m.d})}));
        j["representation"] = {{"matrices", mats}};
    } else {
        j["target"] = {{"kind", "tree"},
                       {"rank", cfg.rep_data.tree_rank},
                       {"edge_lengths", cfg.rep_data.tree_edge_lengths}};
        j["representation"] = {{"words", cfg.rep_data.words}};
    }
    j["solver"] = {{"method", cfg.solver.method == SolverParams::Method::Proximal ? "proximal" : "coordinate_descent"},
                   {"tol", cfg.solver.tol},
                   {"max_iter", cfg.solver.outer_cap},
                   {"seed", cfg.solver.seed}};
    j["sampling"] = {{"pairs", cfg.sampling_pairs}, {"seed", cfg.sampling_seed}};
    j["rigidity_tol"] = cfg.rigidity_tol;
    return j;
}

inline PipelineConfig parse_config(const ordered_json& j) {
    PipelineConfig cfg;
    try {
        cfg.name = j.value("name", std::string("custom"));
        cfg.genus = j.at("genus").get<int>();
        if (cfg.genus < 2) throw std::invalid_argument("config: genus must be >= 2");
        cfg.triangulation = j.value("triangulation", std::string("riemann"));
        if (cfg.triangulation != "riemann")
            throw std::invalid_argument("config: only the 'riemann' one-vertex triangulation is supported");
        const auto& tgt = j.at("target");
        std::string kind = tgt.at("kind").get<std::string>();
        cfg.rep_data.genus = cfg.genus;
        if (kind == "h2") {
            cfg.rep_data.target = TargetKind::H2;
            for (const auto& m : j.at("representation").at("matrices")) {
                if (m.size() != 2 || m[0].size() != 2 || m[1].size() != 2)
                    throw std::invalid_argument("config: each matrix must be 2x2");
                cfg.rep_data.matrices.push_back(
                    {m[0][0].get<double>(), m[0][1].get<double>(), m[1][0].get<double>(), m[1][1].get<double>()});
            }
            if (static_cast<int>(cfg.rep_data.matrices.size()) != 2 * cfg.genus)
                throw std::invalid_argument("config: need one matrix per generator (2 * genus)");
        } else if (kind == "tree") {
            cfg.rep_data.target = TargetKind::Tree;
            cfg.rep_data.tree_rank = tgt.at("rank").get<int>();
            cfg.rep_data.tree_edge_lengths = tgt.at("edge_lengths").get<std::vector<double>>();
            cfg.rep_data.words = j.at("representation").at("words").get<std::vector<std::string>>();
            if (static_cast<int>(cfg.rep_data.words.size()) != 2 * cfg.genus)
                throw std::invalid_argument("config: need one word per generator (2 * genus)");
        } else {
            throw std::invalid_argument("config: target kind must be 'h2' or 'tree'");
        }
        if (j.contains("solver")) {
            const auto& s = j.at("solver");
            std::string method = s.value("method", std::string("coordinate_descent"));
            if (method == "proximal")
                cfg.solver.method = SolverParams::Method::Proximal;
            else if (method == "coordinate_descent")
                cfg.solver.method = SolverParams::Method::CoordinateDescent;
            else
                throw std::invalid_argument("config: unknown solver method '" + method + "'");
            cfg.solver.tol = s.value("tol", cfg.solver.tol);
            cfg.solver.outer_cap = s.value("max_iter", cfg.solver.outer_cap);
            cfg.solver.seed = s.value("seed", cfg.solver.seed);
        }
        if (j.contains("sampling")) {
            cfg.sampling_pairs = j.at("sampling").value("pairs", cfg.sampling_pairs);
            cfg.sampling_seed = j.at("sampling").value("seed", cfg.sampling_seed);
        }
        cfg.rigidity_tol = j.value("rigidity_tol", cfg.rigidity_tol);
    } catch (const ordered_json::exception& e) {
        throw std::invalid_argument(std::string("config: schema violation: ") + e.what());
    }
    return cfg;
}

inline PipelineConfig emit_fixture(const std::string& name) {
    PipelineConfig cfg;
    cfg.rep_data = make_fixture(name);
    cfg.name = name;
    cfg.genus = cfg.rep_data.genus;
    return cfg;
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

struct PipelineResult {
    ordered_json report;
    int exit_code = 0;  // 0 success, 2 diverged, 3 invalid input
    SolveStatus solve_status = SolveStatus::Converged;
};

namespace detail {

inline std::string status_name(SolveStatus s) {
    switch (s) {
        case SolveStatus::Converged: return "Converged";
        case SolveStatus::FixedPointConstant: return "FixedPointConstant";
        default: return "Diverged";
    }
}

inline std::string verdict_name(RigidityVerdict::Status s) {
    switch (s) {
        case RigidityVerdict::Status::Rigid: return "Rigid";
        case RigidityVerdict::Status::NotRigid: return "NotRigid";
        default: return "Inconclusive";
    }
}

inline std::string degeneracy_name(DegeneracyClass::Kind k) {
    switch (k) {
        case DegeneracyClass::Kind::NonDegenerate: return "NonDegenerate";
        case DegeneracyClass::Kind::FlatFaceNoFlatEdge: return "FlatFaceNoFlatEdge";
        case DegeneracyClass::Kind::SomeEdgeFlattened: return "SomeEdgeFlattened";
        default: return "AllEdgesFlattened";
    }
}

}  // namespace detail

inline PipelineResult run_pipeline(const PipelineConfig& cfg) {
    PipelineResult out;
    ordered_json& rpt = out.report;
    rpt["version"] = kVersion;
    rpt["config"] = config_to_json(cfg);

    Representation rep = representation_from_fixture(cfg.rep_data);
    RelatorCheck rc = relator_check(rep);
    rpt["relator_check"] = {{"max_probe_displacement", rc.max_probe_displacement},
                            {"matrix_identity_error", rc.matrix_identity_error},
                            {"pass", rc.pass}};
    if (!rc.pass) throw std::invalid_argument("run_pipeline: representation fails the surface-group relator check");

    GainTriangulation t = riemann_triangulation(cfg.genus);
    SolveOutcome sol = solve_harmonic(t, rep, cfg.solver);
    out.solve_status = sol.status;

    double max_res = 0.0;
    for (double r : sol.residual) max_res = std::max(max_res, r);
    ordered_json solver_j = {{"status", detail::status_name(sol.status)},
                             {"energy", sol.energy},
                             {"max_residual", max_res},
                             {"iterations", sol.iterations},
                             {"note", sol.note}};
    ordered_json trace = ordered_json::array();
    for (const auto& e : sol.trace)
        trace.push_back({{"iteration", e.iteration},
                         {"energy", e.energy},
                         {"max_residual", e.max_residual},
                         {"max_displacement", e.max_displacement}});
    solver_j["trace"] = trace;
    rpt["solver"] = solver_j;

    if (sol.status == SolveStatus::Diverged) {
        rpt["note"] =
            "solver diverged (evanescent / boundary-fixed-point regime); fixed-point-at-infinity analysis is out "
            "of scope";
        out.exit_code = 2;
        return out;
    }

    LengthFunction l = length_function_from_map(t, rep, sol.map);
    rpt["length_function"] = l.lengths;
    ConicalSurface c = build_conical(t, l, cfg.genus);
    rpt["flatten_report"] = {{"flat_faces", c.flatten.flat_faces}, {"flat_edges", c.flatten.flat_edges}};
    rpt["cone_angles"] = c.cone_angles;
    rpt["area"] = c.area;
    rpt["gauss_bonnet_residual"] = gauss_bonnet_residual(c);

    CurvatureCertificate cert = curvature_certificate(c);
    rpt["curvature_certificate"] = {
        {"status", cert.status == CurvatureCertificate::Status::CurvatureAtMostMinusOne ? "CurvatureAtMostMinusOne"
                   : cert.status == CurvatureCertificate::Status::Fails                 ? "Fails"
                                                                                        : "Degenerate"},
        {"margin", cert.margin},
        {"failing_vertices", cert.failing_vertices},
        {"reason", cert.reason}};

    DegeneracyClass cls = classify_degeneracy(t, l, c.cone_angles);
    rpt["degeneracy"] = {{"class", detail::degeneracy_name(cls.kind)},
                         {"flat_face_count", cls.flat_face_count},
                         {"cone_angle_exceeds_2pi", cls.cone_angle_exceeds_2pi},
                         {"rigidity_eligible", cls.rigidity_eligible},
                         {"nonstandard", cls.nonstandard}};

    if (cls.kind == DegeneracyClass::Kind::NonDegenerate) {
        DominationReport dom = lipschitz_sample_check(c, t, rep, sol.map, cfg.sampling_pairs, cfg.sampling_seed);
        rpt["domination"] = {{"samples", dom.samples},       {"max_ratio", dom.max_ratio},
                             {"max_ratio_within", dom.max_ratio_within}, {"max_ratio_cross", dom.max_ratio_cross},
                             {"cross_routed", dom.cross_routed},         {"skipped", dom.skipped},
                             {"pass", dom.pass}};
        ordered_json rig = ordered_json::array();
        bool all_rigid = true, any_not = false;
        for (int v = 0; v < t.num_vertices; ++v) {
            LinkPolygon link = link_polygon(t, rep, sol.map, v);
            RigidityVerdict verdict = rigidity_detect(link, cfg.rigidity_tol);
            all_rigid = all_rigid && verdict.status == RigidityVerdict::Status::Rigid;
            any_not = any_not || verdict.status == RigidityVerdict::Status::NotRigid;
            rig.push_back({{"vertex", v},
                           {"status", detail::verdict_name(verdict.status)},
                           {"angle_sum_residual", verdict.angle_sum_residual},
                           {"equality_residuals", verdict.equality_residuals},
                           {"local_geodesic_residuals", verdict.local_geodesic_residuals},
                           {"alpha", link.alpha},
                           {"alpha_tilde", link.alpha_tilde}});
        }
        rpt["rigidity"] = {{"per_vertex", rig},
                           {"verdict", all_rigid ? "Rigid" : (any_not ? "NotRigid" : "Inconclusive")}};
        bool ok = cert.status == CurvatureCertificate::Status::CurvatureAtMostMinusOne && dom.pass;
        rpt["status"] = ok ? "conical domination certified; smooth uniformization out of scope"
                           : "certification failed";
        out.exit_code = ok ? 0 : 1;
        return out;
    }

    // Degenerate path.
    EpsilonChoice choice = choose_epsilon(t, l, c.cone_angles, cfg.genus);
    if (choice.verdict == EpsilonChoice::Verdict::FixedPointConstant) {
        rpt["desingularization"] = {{"verdict", "FixedPointConstant"}};
        rpt["status"] = "constant map: trivially dominated by any Fuchsian representation";
        out.exit_code = 0;
        return out;
    }
    if (choice.verdict == EpsilonChoice::Verdict::Rigidity) {
        rpt["desingularization"] = {{"verdict", "Rigidity"}};
        rpt["status"] = "rigidity case: cone angle 2 pi with a single flat face; rigidity argument applies";
        out.exit_code = 0;
        return out;
    }
    const PerturbationPlan& plan = *choice.plan;
    ConicalSurface cp = build_conical(t, perturb(l, plan.epsilon), cfg.genus);
    CurvatureCertificate cert_p = curvature_certificate(cp);
    ComposedCheckReport comp = composed_domination_check(t, l, plan.epsilon, rep, sol.map, cfg.sampling_pairs,
                                                         cfg.sampling_seed, cfg.genus);
    rpt["desingularization"] = {
        {"verdict", "Perturbed"},
        {"epsilon", plan.epsilon},
        {"predicted_margin", plan.predicted_margin},
        {"perturbed_certificate",
         {{"status", cert_p.status == CurvatureCertificate::Status::CurvatureAtMostMinusOne
                         ? "CurvatureAtMostMinusOne"
                         : "Fails"},
          {"margin", cert_p.margin}}},
        {"composed_domination",
         {{"samples", comp.samples}, {"max_ratio", comp.max_ratio}, {"max_excess", comp.max_excess},
          {"skipped", comp.skipped}, {"pass", comp.pass}}}};
    bool ok = cert_p.status == CurvatureCertificate::Status::CurvatureAtMostMinusOne && comp.pass;
    rpt["status"] = ok ? "conical domination certified after desingularization; smooth uniformization out of scope"
                       : "certification failed";
    out.exit_code = ok ? 0 : 1;
    return out;
}

}  // namespace catsurf
