#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "catsurf/pipeline.hpp"
#include "test_support.hpp"

using namespace catsurf;
using namespace testsupport;

TEST_CASE("emit_fixture / config round trip for every fixture") {
    for (const std::string& name : fixture_names()) {
        PipelineConfig cfg = emit_fixture(name);
        ordered_json j = config_to_json(cfg);
        PipelineConfig back = parse_config(j);
        CHECK(back.name == cfg.name);
        CHECK(back.genus == cfg.genus);
        CHECK(config_to_json(back) == j);  // byte-stable round trip
    }
}

TEST_CASE("run_pipeline: octagon fixture certifies end to end") {
    PipelineResult res = run_pipeline(emit_fixture("fuchsian_octagon_g2"));
    CHECK(res.exit_code == 0);
    CHECK(res.solve_status == SolveStatus::Converged);
    const ordered_json& r = res.report;
    CHECK(r.at("relator_check").at("pass").get<bool>());
    CHECK(r.at("solver").at("status").get<std::string>() == "Converged");
    CHECK_THAT(r.at("solver").at("energy").get<double>(),
               Catch::Matchers::WithinAbs(kOctagonEnergy, 1e-6));
    CHECK_THAT(r.at("cone_angles")[0].get<double>(), Catch::Matchers::WithinAbs(2 * kPi, 1e-6));
    CHECK_THAT(r.at("area").get<double>(), Catch::Matchers::WithinAbs(4 * kPi, 1e-6));
    CHECK(r.at("gauss_bonnet_residual").get<double>() < 1e-8);
    CHECK(r.at("curvature_certificate").at("status").get<std::string>() == "CurvatureAtMostMinusOne");
    CHECK(r.at("degeneracy").at("class").get<std::string>() == "NonDegenerate");
    CHECK(r.at("domination").at("pass").get<bool>());
    CHECK(r.at("domination").at("max_ratio").get<double>() <= 1.0 + 1e-9);
    CHECK(r.at("rigidity").at("verdict").get<std::string>() == "Rigid");
}

TEST_CASE("run_pipeline: trivial representation is a constant fixed point") {
    PipelineResult res = run_pipeline(emit_fixture("trivial_rep"));
    CHECK(res.exit_code == 0);
    CHECK(res.solve_status == SolveStatus::FixedPointConstant);
    CHECK(res.report.at("solver").at("status").get<std::string>() == "FixedPointConstant");
    CHECK(res.report.at("desingularization").at("verdict").get<std::string>() == "FixedPointConstant");
}

TEST_CASE("run_pipeline: degenerate fixtures take the perturbation path") {
    for (const char* name : {"elliptic_rotations", "mixed_elliptic_hyperbolic", "tree_overlapping_axes"}) {
        PipelineResult res = run_pipeline(emit_fixture(name));
        INFO("fixture " << name);
        CHECK(res.exit_code == 0);
        const ordered_json& d = res.report.at("desingularization");
        CHECK(d.at("verdict").get<std::string>() == "Perturbed");
        CHECK(d.at("epsilon").get<double>() > 0.0);
        CHECK(d.at("predicted_margin").get<double>() > 1e-9);
        CHECK(d.at("perturbed_certificate").at("status").get<std::string>() == "CurvatureAtMostMinusOne");
        CHECK(d.at("composed_domination").at("pass").get<bool>());
    }
}

TEST_CASE("run_pipeline: divergent fixture exits 2 with an explanatory note") {
    PipelineResult res = run_pipeline(emit_fixture("hyperbolic_cyclic_divergent"));
    CHECK(res.exit_code == 2);
    CHECK(res.solve_status == SolveStatus::Diverged);
    CHECK(res.report.at("solver").at("status").get<std::string>() == "Diverged");
    CHECK_FALSE(res.report.at("note").get<std::string>().empty());
    CHECK_FALSE(res.report.contains("cone_angles"));  // geometry is skipped
    // Displacement trace is monotone non-decreasing.
    const auto& trace = res.report.at("solver").at("trace");
    double prev = -1.0;
    for (const auto& e : trace) {
        double d = e.at("max_displacement").get<double>();
        CHECK(d >= prev - 1e-9);
        prev = d;
    }
}

TEST_CASE("run_pipeline is byte-identically deterministic") {
    for (const char* name : {"fuchsian_octagon_g2", "tree_overlapping_axes"}) {
        PipelineResult a = run_pipeline(emit_fixture(name));
        PipelineResult b = run_pipeline(emit_fixture(name));
        INFO("fixture " << name);
        CHECK(a.report.dump(2) == b.report.dump(2));
        CHECK(a.exit_code == b.exit_code);
    }
}

TEST_CASE("parse_config rejects invalid inputs") {
    ordered_json good = config_to_json(emit_fixture("fuchsian_octagon_g2"));

    ordered_json bad_genus = good;
    bad_genus["genus"] = 1;
    CHECK_THROWS_AS(parse_config(bad_genus), std::invalid_argument);

    ordered_json bad_method = good;
    bad_method["solver"]["method"] = "newton";
    CHECK_THROWS_AS(parse_config(bad_method), std::invalid_argument);

    ordered_json bad_count = good;
    bad_count["representation"]["matrices"].erase(3);
    CHECK_THROWS_AS(parse_config(bad_count), std::invalid_argument);

    ordered_json bad_tri = good;
    bad_tri["triangulation"] = "fan";
    CHECK_THROWS_AS(parse_config(bad_tri), std::invalid_argument);

    ordered_json bad_kind = good;
    bad_kind["target"]["kind"] = "r3";
    CHECK_THROWS_AS(parse_config(bad_kind), std::invalid_argument);

    ordered_json missing = good;
    missing.erase("target");
    CHECK_THROWS_AS(parse_config(missing), std::invalid_argument);
}

TEST_CASE("representation with non-unit determinant is rejected when realized") {
    PipelineConfig cfg = emit_fixture("fuchsian_octagon_g2");
    cfg.rep_data.matrices[0].a *= 1.5;  // determinant now != 1
    CHECK_THROWS_AS(representation_from_fixture(cfg.rep_data), std::invalid_argument);
}

TEST_CASE("run_pipeline rejects relator-violating representations") {
    PipelineConfig cfg = emit_fixture("fuchsian_octagon_g2");
    // Swap two generators: still SL(2,R) but the surface relation breaks.
    std::swap(cfg.rep_data.matrices[0], cfg.rep_data.matrices[2]);
    CHECK_THROWS_AS(run_pipeline(cfg), std::invalid_argument);
}

TEST_CASE("fixture solver seeds do not change certified quantities") {
    PipelineConfig a = emit_fixture("fuchsian_octagon_g2");
    PipelineConfig b = a;
    b.solver.seed = 42;
    PipelineResult ra = run_pipeline(a), rb = run_pipeline(b);
    REQUIRE(ra.exit_code == 0);
    REQUIRE(rb.exit_code == 0);
    CHECK_THAT(ra.report.at("solver").at("energy").get<double>(),
               Catch::Matchers::WithinAbs(rb.report.at("solver").at("energy").get<double>(), 1e-7));
    CHECK_THAT(ra.report.at("cone_angles")[0].get<double>(),
               Catch::Matchers::WithinAbs(rb.report.at("cone_angles")[0].get<double>(), 1e-7));
}
