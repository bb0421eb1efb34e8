#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "plateforge/cases.hpp"
#include "plateforge/errors.hpp"
#include "plateforge/io.hpp"

using namespace plateforge;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("plateforge_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}
std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}
}  // namespace

TEST_CASE("mesh JSON round trip") {
    PolyMesh m = generate_structured_mesh({0, 0}, {1, 1}, 2, 1, CellShape::Quad);
    m.scaling_centers = std::vector<Vec2>{{0.25, 0.5}, {0.75, 0.5}};
    const fs::path f = scratch("mesh") / "m.json";
    write_mesh_json(f, m);
    const PolyMesh back = read_mesh_json(f);
    CHECK(back.elements == m.elements);
    REQUIRE(back.scaling_centers.has_value());
    CHECK(((*back.scaling_centers)[1] - Vec2(0.75, 0.5)).norm() == 0.0);
    for (int i = 0; i < m.num_nodes(); ++i) CHECK((back.nodes[i] - m.nodes[i]).norm() == 0.0);

    Json bad = mesh_to_json(m);
    bad["elements"][0][1] = 99;
    CHECK_THROWS_AS(mesh_from_json(bad), IoError);
    CHECK_THROWS_AS(read_mesh_json(f.parent_path() / "missing.json"), IoError);
}

TEST_CASE("domain JSON") {
    const DomainDocument d = domain_from_json(Json::parse(
        R"({"type":"l_bracket","holes":[{"center":[0.5,0.5],"radius":0.25}],"density":{"background":0.2,"attractors":[[0.5,0.5,0.5]]}})"));
    CHECK(d.domain.kind() == DomainSpec::Kind::LBracket);
    CHECK(d.domain.holes().size() == 1);
    CHECK(d.density.attractors.size() == 1);
    const DomainDocument c = domain_from_json(Json::parse(R"({"type":"circle","center":[0,0],"radius":2})"));
    CHECK(c.domain.outer_circle().radius == 2.0);
    CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"type":"hexagon"})")), IoError);
}

TEST_CASE("CSV output") {
    CHECK(std::stod(Table::num(0.1)) == 0.1);
    CHECK(std::stod(Table::num(1.0 / 3.0)) == 1.0 / 3.0);
    Table t{{"a", "b"}, {}};
    t.add_row({"1", "x,y"});
    CHECK(to_csv(t) == "a,b\n1,\"x,y\"\n");
    CHECK_THROWS(t.add_row({"1"}));
}

TEST_CASE("reference data") {
    const ReferenceData& r = ReferenceData::instance();
    CHECK(r.value("clamped_square.w_ref") == -12.6);
    CHECK(r.values("square_load_function.energy_norm_values").size() == 5);
    CHECK_THROWS_AS(r.at("clamped_square.nothing"), IoError);
}

TEST_CASE("chart and field writers") {
    const fs::path dir = scratch("writers");
    write_svg_line_chart(dir / "c.svg", {"title", "x", "y", true, true}, {{"s", {1, 10, 100}, {1, 0.1, 0.01}}});
    const std::string svg = slurp(dir / "c.svg");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);

    const PolyMesh mesh = generate_structured_mesh({0, 0}, {1, 1}, 2, 2, CellShape::Quad);
    MaterialModel mat;
    const FieldResult sol = solve(assemble_global(mesh, mat, {UniformPressure{1.0}},
                                                  {{Selector::line({0, 0}, {0, 1}), {Dof::W, Dof::BetaX, Dof::BetaY}}}));
    write_vtk(dir / "f.vtk", mesh, sol, recover_element_resultants(sol, mesh, mat, {}));
    const std::string vtk = slurp(dir / "f.vtk");
    CHECK(vtk.find("CELLS 4 20") != std::string::npos);
    CHECK(vtk.find("m_xx") != std::string::npos);
}

TEST_CASE("case parameters") {
    CaseParams p;
    p.apply_json(Json::parse(R"({"case":"circular","t":[0.1],"n":[16,32],"mesh":"poly","formulation":"standard","seed":3})"));
    CHECK(p.id == "circular");
    CHECK(p.sizes == std::vector<int>{16, 32});
    CHECK(*p.formulation == Formulation::Standard);
    CaseParams q;
    q.apply_json(p.to_json());
    CHECK(q.to_json() == p.to_json());
    CHECK_THROWS_AS(p.apply_json(Json::parse(R"({"mesh":"hex"})")), ArgumentError);
    CHECK_THROWS_AS(parse_quadrature("gauss"), ArgumentError);
    CaseParams unknown;
    unknown.id = "nope";
    CHECK_THROWS_AS(run_benchmark(unknown), ArgumentError);
}

TEST_CASE("benchmark outputs are reproducible") {
    CaseParams p;
    p.id = "circular";
    p.thicknesses = {0.1};
    p.sizes = {16, 32, 64};
    p.lloyd_iterations = 20;
    const fs::path a = scratch("run_a"), b = scratch("run_b");
    const RunReport ra = run_benchmark(p, a);
    run_benchmark(p, b);
    for (const char* f : {"norms.csv", "rates.csv", "checks.csv", "report.json"}) {
        INFO(f);
        REQUIRE(fs::exists(a / f));
        CHECK(slurp(a / f) == slurp(b / f));
    }
    CHECK(fs::exists(a / "errors.svg"));
    CHECK(fs::exists(a / "finest.vtk"));
    CHECK(ra.tables.size() == 2);
}

TEST_CASE("formulation comparison") {
    CaseParams p;
    p.id = "cantilever-udl";
    p.thicknesses = {0.01};
    p.sizes = {1, 2, 4};
    const RunReport r = compare_formulations(p, {{Formulation::ANS, QuadratureScheme::Full},
                                                 {Formulation::Standard, QuadratureScheme::Full}});
    CHECK(r.check("ordering_vs_Standard").pass);
    p.id = "l-bracket";
    CHECK_THROWS_AS(compare_formulations(p, {{Formulation::ANS, QuadratureScheme::Full},
                                             {Formulation::Standard, QuadratureScheme::Full}}),
                    ArgumentError);
}

TEST_CASE("six-polygon cantilever mesh") {
    const PolyMesh m = cantilever_six_polygon_mesh();
    CHECK(validate_mesh(m).ok());
    double area = 0.0;
    for (int e = 0; e < m.num_elements(); ++e) area += element_area(m, e);
    CHECK(area == doctest::Approx(2.0));
}
