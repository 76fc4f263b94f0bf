// catsurf CLI: harmonic maps to CAT(-1) targets, conical surfaces,
// certificates, desingularization, and rigidity detection.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "catsurf/pipeline.hpp"

namespace {

using catsurf::ordered_json;

struct CommonOpts {
    std::string config_path;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<int> max_iter;
    std::optional<int> samples;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool config_required) {
    auto* c = cmd->add_option("--config", o.config_path, "pipeline config JSON");
    if (config_required) c->required();
    cmd->add_option("--out", o.out_path, "output path (default: stdout)");
    cmd->add_option("--seed", o.seed, "override solver seed");
    cmd->add_option("--tol", o.tol, "override solver tolerance");
    cmd->add_option("--max-iter", o.max_iter, "override iteration cap");
    cmd->add_option("--samples", o.samples, "override sampling pair count");
}

catsurf::PipelineConfig load_config(const CommonOpts& o) {
    std::ifstream in(o.config_path);
    if (!in) throw std::invalid_argument("cannot open config file: " + o.config_path);
    ordered_json j;
    try {
        in >> j;
    } catch (const ordered_json::exception& e) {
        throw std::invalid_argument(std::string("config parse error: ") + e.what());
    }
    catsurf::PipelineConfig cfg = catsurf::parse_config(j);
    if (o.seed) cfg.solver.seed = *o.seed;
    if (o.tol) cfg.solver.tol = *o.tol;
    if (o.max_iter) cfg.solver.outer_cap = *o.max_iter;
    if (o.samples) cfg.sampling_pairs = *o.samples;
    return cfg;
}

void write_output(const CommonOpts& o, const ordered_json& j) {
    std::string text = j.dump(2) + "\n";
    if (o.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(o.out_path, std::ios::binary);
        if (!out) throw std::invalid_argument("cannot open output file: " + o.out_path);
        out << text;
    }
}

ordered_json select_sections(const ordered_json& report, std::initializer_list<const char*> keys) {
    ordered_json out;
    out["version"] = report.at("version");
    out["config"] = report.at("config");
    for (const char* k : keys)
        if (report.contains(k)) out[k] = report.at(k);
    return out;
}

int run_verb(const std::string& verb, const CommonOpts& o) {
    catsurf::PipelineConfig cfg = load_config(o);
    catsurf::PipelineResult res = catsurf::run_pipeline(cfg);
    if (verb == "pipeline") {
        write_output(o, res.report);
    } else if (verb == "solve") {
        write_output(o, select_sections(res.report, {"relator_check", "solver"}));
    } else if (verb == "certify") {
        write_output(o, select_sections(res.report,
                                        {"relator_check", "solver", "length_function", "flatten_report",
                                         "cone_angles", "area", "gauss_bonnet_residual", "curvature_certificate",
                                         "domination", "status"}));
    } else if (verb == "desing") {
        write_output(o, select_sections(res.report,
                                        {"solver", "flatten_report", "cone_angles", "degeneracy",
                                         "desingularization", "status"}));
    } else if (verb == "rigidity") {
        write_output(o, select_sections(res.report,
                                        {"solver", "cone_angles", "degeneracy", "rigidity", "status"}));
    }
    return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"discrete harmonic maps into CAT(-1) targets: conical surfaces, certification, rigidity"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string fixture_name;
    for (const char* verb : {"solve", "certify", "desing", "rigidity", "pipeline"})
        add_common(app.add_subcommand(verb), opts, true);
    auto* fix = app.add_subcommand("fixture", "emit a canonical fixture config");
    fix->add_option("name", fixture_name, "fixture name")->required();
    fix->add_option("--out", opts.out_path, "output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 3;
    }

    try {
        std::string verb = app.get_subcommands().front()->get_name();
        if (verb == "fixture") {
            write_output(opts, catsurf::config_to_json(catsurf::emit_fixture(fixture_name)));
            return 0;
        }
        return run_verb(verb, opts);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
