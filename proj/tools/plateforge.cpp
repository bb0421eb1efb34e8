#include <CLI11.hpp>
#include <iostream>

#include "plateforge/cases.hpp"
#include "plateforge/errors.hpp"
#include "plateforge/io.hpp"
#include "plateforge/verify.hpp"

using namespace plateforge;

namespace {

// "ans:full" or "standard:selective"; the quadrature part defaults to full.
std::pair<Formulation, QuadratureScheme> parse_variant(const std::string& s) {
    const auto colon = s.find(':');
    const Formulation f = parse_formulation(s.substr(0, colon));
    const QuadratureScheme q = colon == std::string::npos ? QuadratureScheme::Full : parse_quadrature(s.substr(colon + 1));
    return {f, q};
}

void print_report(const RunReport& r) {
    std::cout << r.case_id << " finished in " << r.wall_seconds << " s\n";
    for (const auto& c : r.checks) std::cout << "  " << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Polygonal scaled boundary plate solver"};
    app.require_subcommand(1);

    auto* mesh_cmd = app.add_subcommand("mesh", "mesh generation and checks");
    mesh_cmd->require_subcommand(1);
    std::string domain_path, mesh_out, check_path;
    int n_cells = 100, lloyd = 100;
    std::uint64_t mesh_seed = 42;
    auto* vor = mesh_cmd->add_subcommand("voronoi", "Lloyd-relaxed Voronoi mesh of a domain");
    vor->add_option("--domain", domain_path, "domain description (JSON)")->required()->check(CLI::ExistingFile);
    vor->add_option("--n", n_cells, "number of polygons")->check(CLI::PositiveNumber);
    vor->add_option("--seed", mesh_seed, "random seed");
    vor->add_option("--lloyd", lloyd, "maximum Lloyd iterations")->check(CLI::NonNegativeNumber);
    vor->add_option("-o,--output", mesh_out, "mesh JSON file")->required();
    auto* chk = mesh_cmd->add_subcommand("check", "validate a mesh JSON file");
    chk->add_option("mesh", check_path)->required()->check(CLI::ExistingFile);

    auto* run_cmd = app.add_subcommand("run", "run one benchmark case");
    CaseParams params;
    std::string case_id, out_dir, config, mesh_kind, formulation, quadrature, law, mode, sc, support;
    std::vector<std::string> compare;
    double length = 0.0, nu = -1.0;
    bool no_fields = false;
    run_cmd->add_option("case", case_id, "case id")->required()->check(CLI::IsMember(case_ids()));
    run_cmd->add_option("--config", config, "JSON file with case parameters")->check(CLI::ExistingFile);
    std::vector<double> cli_t;
    std::vector<int> cli_n;
    std::uint64_t cli_seed = 42;
    int cli_lloyd = 100, cli_threads = 1;
    run_cmd->add_option("--t", cli_t, "plate thickness(es)");
    run_cmd->add_option("--mesh", mesh_kind, "quad|tri|poly");
    run_cmd->add_option("--n", cli_n, "refinement level(s)");
    run_cmd->add_option("--formulation", formulation, "standard|ans");
    run_cmd->add_option("--quadrature", quadrature, "full|reduced|selective");
    run_cmd->add_option("--law", law, "plate2d|solid3d");
    run_cmd->add_option("--thickness-mode", mode, "linear|constant");
    run_cmd->add_option("--sc", sc, "moving|fixed");
    run_cmd->add_option("--support", support, "hard|soft");
    run_cmd->add_option("--length", length, "plate side length");
    run_cmd->add_option("--nu", nu, "Poisson ratio");
    auto* seed_opt = run_cmd->add_option("--seed", cli_seed, "mesh seed");
    auto* lloyd_opt = run_cmd->add_option("--lloyd", cli_lloyd, "Lloyd iterations for Voronoi meshes");
    auto* threads_opt = run_cmd->add_option("--threads", cli_threads, "assembly threads (0 = all)");
    run_cmd->add_option("--compare", compare, "formulation sweep, e.g. ans standard:reduced standard:selective");
    run_cmd->add_flag("--no-fields", no_fields, "skip VTK output");
    run_cmd->add_option("-o,--output", out_dir, "output directory")->required();

    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance suite");
    int verify_threads = 1;
    bool properties_only = false;
    verify_cmd->add_option("--threads", verify_threads, "assembly threads");
    verify_cmd->add_flag("--properties", properties_only, "only the property suites");

    app.add_subcommand("list", "list benchmark cases");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("list")) {
            for (const auto& id : case_ids()) std::cout << id << "\n";
            return 0;
        }
        if (vor->parsed()) {
            const DomainDocument doc = read_domain_json(domain_path);
            const VoronoiResult res = generate_voronoi(doc.domain, n_cells, doc.density, lloyd, mesh_seed);
            write_mesh_json(mesh_out, res.mesh);
            std::cout << res.mesh.num_elements() << " polygons, " << res.mesh.num_nodes() << " nodes, " << res.iterations
                      << " Lloyd iterations\n";
            return 0;
        }
        if (chk->parsed()) {
            const MeshReport rep = validate_mesh(read_mesh_json(check_path));
            std::cout << (rep.ok() ? "valid mesh" : "invalid mesh: " + rep.summary()) << "\n";
            return rep.ok() ? 0 : 1;
        }
        if (run_cmd->parsed()) {
            if (!config.empty()) params.apply_json(read_json(config));
            if (!cli_t.empty()) params.thicknesses = cli_t;
            if (!cli_n.empty()) params.sizes = cli_n;
            if (seed_opt->count()) params.seed = cli_seed;
            if (lloyd_opt->count()) params.lloyd_iterations = cli_lloyd;
            if (threads_opt->count()) params.threads = cli_threads;
            params.id = case_id;
            if (!mesh_kind.empty()) params.mesh = parse_mesh_kind(mesh_kind);
            if (!formulation.empty()) params.formulation = parse_formulation(formulation);
            if (!quadrature.empty()) params.quadrature = parse_quadrature(quadrature);
            if (!law.empty()) params.law = parse_law(law);
            if (!mode.empty()) params.thickness_mode = parse_thickness_mode(mode);
            if (!sc.empty()) params.sc = parse_sc_policy(sc);
            if (!support.empty()) params.support = parse_support(support);
            if (length > 0.0) params.length = length;
            if (nu >= 0.0) params.nu = nu;
            params.write_fields = !no_fields;
            RunReport rep;
            if (compare.empty()) {
                rep = run_benchmark(params, std::filesystem::path(out_dir));
            } else {
                std::vector<std::pair<Formulation, QuadratureScheme>> variants;
                for (const auto& v : compare) variants.push_back(parse_variant(v));
                rep = compare_formulations(params, variants, std::filesystem::path(out_dir));
            }
            print_report(rep);
            std::cout << "outputs written to " << out_dir << "\n";
            return 0;
        }
        if (verify_cmd->parsed()) {
            bool ok = true;
            if (properties_only) {
                for (const auto& p : run_property_suites()) {
                    std::cout << (p.pass ? "PASS " : "FAIL ") << p.name << ": " << p.detail << "\n";
                    ok = ok && p.pass;
                }
            } else {
                run_acceptance(verify_threads, [&](const CriterionResult& r) {
                    std::cout << format_criterion(r) << std::endl;
                    ok = ok && r.pass;
                });
            }
            return ok ? 0 : 1;
        }
    } catch (const ArgumentError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
