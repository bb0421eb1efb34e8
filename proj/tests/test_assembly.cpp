#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "plateforge/analysis.hpp"
#include "plateforge/assembly.hpp"
#include "plateforge/errors.hpp"

using namespace plateforge;

namespace {
MaterialModel plate(double t = 0.1) {
    MaterialModel m;
    m.E = 1e4;
    m.nu = 0.3;
    m.t = t;
    return m;
}
const std::vector<Dof> kClamp{Dof::W, Dof::BetaX, Dof::BetaY};
}  // namespace

TEST_CASE("quadrature selection") {
    StiffnessOptions o;
    CHECK(bending_rule(o).size() == 4);
    CHECK(shear_rule(o).size() == 4);
    o.formulation = Formulation::Standard;
    o.scheme = QuadratureScheme::SelectiveReduced;
    CHECK(bending_rule(o).size() == 4);
    CHECK(shear_rule(o).size() == 1);
    o.scheme = QuadratureScheme::Reduced;
    CHECK(bending_rule(o).size() == 1);
}

TEST_CASE("static condensation") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Random(6, 6);
    const Eigen::MatrixXd k = a * a.transpose() + 6 * Eigen::MatrixXd::Identity(6, 6);
    const Eigen::MatrixXd want =
        k.topLeftCorner(4, 4) - k.topRightCorner(4, 2) * k.bottomRightCorner(2, 2).inverse() * k.bottomLeftCorner(2, 4);
    CHECK((condense(k, 4) - want).norm() < 1e-12 * want.norm());
}

TEST_CASE("element stiffness layout") {
    const PolyMesh m = regular_polygon_mesh(5, 1.0);
    const ElementStiffness full = element_stiffness(m, 0, plate(), {}, false);
    CHECK(full.k_e.rows() == 18);
    const ElementStiffness cond = element_stiffness(m, 0, plate(), {}, true);
    CHECK(cond.k_e.rows() == 15);
    CHECK(cond.condensed);
    CHECK((condense(full.k_e, 15) - cond.k_e).norm() < 1e-10 * cond.k_e.norm());
    MaterialModel solid = plate();
    solid.law = MaterialLaw::Solid3D;
    CHECK(element_stiffness(m, 0, solid, {}, false).k_e.rows() == 30);
}

TEST_CASE("selectors") {
    CHECK(Selector::line({0, 0}, {1, 0}).matches({0.5, 0.0}));
    CHECK_FALSE(Selector::line({0, 0}, {1, 0}).matches({1.5, 0.0}));
    CHECK(Selector::circle({0, 0}, 1.0, 1e-6).matches({0.0, 1.0}));
    CHECK_FALSE(Selector::circle({0, 0}, 1.0, 1e-6).matches({0.0, 0.5}));
    CHECK(Selector::box({0, 0}, {1, 1}).matches({0.5, 0.5}));
    CHECK(Selector::all().matches({9, 9}));
}

TEST_CASE("parallel assembly equals serial assembly") {
    const PolyMesh mesh = generate_voronoi_mesh(DomainSpec::rectangle({0, 0}, {2, 1}), 150, DensityField{}, 20, 2);
    const std::vector<BoundaryCondition> bcs = {{Selector::line({0, 0}, {0, 1}), kClamp}};
    const std::vector<LoadSpec> loads = {UniformPressure{-1.0}, PointLoad{mesh.nodes[3], 2.0}};
    AssemblyOptions par;
    par.threads = 4;
    const GlobalSystem a = assemble_global_serial(mesh, plate(), loads, bcs);
    const GlobalSystem b = assemble_global(mesh, plate(), loads, bcs, par);
    const Eigen::MatrixXd ka(a.k), kb(b.k);
    CHECK((ka - kb).norm() <= 1e-12 * ka.norm());
    CHECK((a.f - b.f).norm() <= 1e-12 * a.f.norm());
    CHECK(a.constraints == b.constraints);
    const FieldResult sa = solve(a), sb = solve(b);
    CHECK((sa.d - sb.d).norm() <= 1e-12 * sa.d.norm());
    CHECK(sa.residual < 1e-9);
}

TEST_CASE("rigid support of a pure bending field") {
    // Constant moment on a Voronoi strip: the ANS solution is exact at every node.
    const PolyMesh mesh = generate_voronoi_mesh(DomainSpec::rectangle({0, 0}, {2, 1}), 30, DensityField{}, 30, 8);
    MaterialModel mat = plate(0.01);
    mat.nu = 0.0;
    const GlobalSystem sys = assemble_global(mesh, mat, {MomentLineLoad{Selector::line({2, 0}, {2, 1}), 1.0, Dof::BetaX}},
                                             {{Selector::line({0, 0}, {0, 1}), kClamp}});
    const FieldResult sol = solve(sys);
    const ExactSolution ex = cantilever_moment_solution(1.0, mat.E, mat.t);
    double worst = 0.0, scale = 0.0;
    for (int n = 0; n < mesh.num_nodes(); ++n) {
        worst = std::max(worst, std::abs(sol.node_value(n, Dof::W) - ex.v(mesh.nodes[n])(0)));
        scale = std::max(scale, std::abs(ex.v(mesh.nodes[n])(0)));
    }
    CHECK(worst <= 1e-6 * scale);
}

TEST_CASE("constraint and load errors") {
    const PolyMesh mesh = generate_structured_mesh({0, 0}, {1, 1}, 2, 2, CellShape::Quad);
    CHECK_THROWS_AS(solve(assemble_global(mesh, plate(), {UniformPressure{1.0}}, {})), Error);
    CHECK_THROWS_AS(assemble_global(mesh, plate(), {PointLoad{{5, 5}, 1.0}}, {{Selector::line({0, 0}, {0, 1}), kClamp}}),
                    LoadPlacementError);
    CHECK_THROWS_AS(assemble_global(mesh, plate(), {UniformPressure{1.0}}, {{Selector::line({9, 9}, {9, 10}), kClamp}}),
                    ConstraintError);
}

TEST_CASE("prescribed displacement") {
    const PolyMesh mesh = generate_structured_mesh({0, 0}, {1, 1}, 2, 2, CellShape::Quad);
    const std::vector<BoundaryCondition> bcs = {{Selector::all(), {Dof::BetaX, Dof::BetaY}},
                                                {Selector::all(), {Dof::W}, 0.25}};
    const FieldResult sol = solve(assemble_global(mesh, plate(), {}, bcs));
    for (int n = 0; n < mesh.num_nodes(); ++n) CHECK(sol.node_value(n, Dof::W) == doctest::Approx(0.25));
}
