#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <functional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "plateforge/kinematics.hpp"
#include "plateforge/material.hpp"
#include "plateforge/mesh.hpp"
#include "plateforge/quadrature.hpp"

namespace plateforge {

enum class Formulation { Standard, ANS };
enum class QuadratureScheme { Full, Reduced, SelectiveReduced };

std::string to_string(Formulation f);
std::string to_string(QuadratureScheme q);

struct StiffnessOptions {
    Formulation formulation = Formulation::ANS;
    QuadratureScheme scheme = QuadratureScheme::Full;
    // Points per direction of the Full rule.
    int full_order = 2;
};

// Sample points used for the bending/membrane part and the shear part.
std::vector<QuadPoint> bending_rule(const StiffnessOptions& opt);
std::vector<QuadPoint> shear_rule(const StiffnessOptions& opt);

// Shear operator (standard or assumed natural strain) of a section.
Eigen::Matrix<double, 2, 9> shear_operator(const Section& s, double xi, double eta, Formulation f);

// Plate2D sectional stiffness split into its bending and shear parts (9x9 each).
struct SectionStiffnessParts {
    Eigen::Matrix<double, 9, 9> k_b;
    Eigen::Matrix<double, 9, 9> k_s;
};
SectionStiffnessParts plate_section_parts(const Section& s, const PlateMaterial2D& mat, const StiffnessOptions& opt);

// Sectional stiffness: 9x9 for Plate2D, 15x15 (membrane + plate, thickness strains
// condensed) for Solid3D. Point blocks ordered (node1, node2, center).
Eigen::MatrixXd section_stiffness(const Section& s, const MaterialModel& mat, const StiffnessOptions& opt);

// Generalized strain operator [B_m; B_b; B_s] (8x15) for the 5-DOF layout.
Eigen::Matrix<double, 8, 15> generalized_operator(const Section& s, double xi, double eta, Formulation f);

// Solid3D only: eps_z = T * d_sec recovers the condensed thickness-strain parameters.
Eigen::MatrixXd thickness_strain_map(const Section& s, const MaterialModel& mat, const StiffnessOptions& opt);

struct ElementStiffness {
    Eigen::MatrixXd k_e;
    Eigen::VectorXd f_e;
    std::vector<int> dof_map;  // global index per local DOF (empty when built standalone)
    int n_boundary_nodes = 0;
    int dofs_per_point = 3;
    bool condensed = false;
};

// Static condensation of the trailing (size - n_keep) DOFs: K_bb - K_bc K_cc^-1 K_cb.
Eigen::MatrixXd condense(const Eigen::MatrixXd& k, int n_keep);

// Local DOFs: boundary nodes in loop order then the scaling center.
ElementStiffness element_stiffness(const PolyMesh& mesh, int element, const MaterialModel& mat,
                                   const StiffnessOptions& opt, bool condense_center = false);

// Point / edge selection for loads and constraints.
struct Selector {
    enum class Kind { All, Point, Line, Circle, Box };
    Kind kind = Kind::All;
    Vec2 a{0.0, 0.0};
    Vec2 b{0.0, 0.0};
    double radius = 0.0;
    double tol = 1e-9;

    static Selector all() { return {}; }
    static Selector point(Vec2 p, double tol = 1e-9) { return {Kind::Point, p, p, 0.0, tol}; }
    // Points within tol of the segment a-b.
    static Selector line(Vec2 a, Vec2 b, double tol = 1e-9) { return {Kind::Line, a, b, 0.0, tol}; }
    static Selector circle(Vec2 c, double r, double tol = 1e-9) { return {Kind::Circle, c, c, r, tol}; }
    static Selector box(Vec2 lo, Vec2 hi) { return {Kind::Box, lo, hi, 0.0, 0.0}; }

    bool matches(const Vec2& p) const;
};

struct UniformPressure {
    double q = 0.0;
};
struct PointLoad {
    Vec2 where;
    double value = 0.0;
    Dof dof = Dof::W;
};
struct LineLoad {
    Selector edge;
    double intensity = 0.0;
    Dof dof = Dof::W;
};
struct MomentLineLoad {
    Selector edge;
    double m = 0.0;
    Dof dof = Dof::BetaX;
};
struct FunctionLoad {
    std::function<double(double, double)> f;
    int order = 4;
};
using LoadSpec = std::variant<UniformPressure, PointLoad, LineLoad, MomentLineLoad, FunctionLoad>;

struct BoundaryCondition {
    Selector where;
    std::vector<Dof> dofs;
    double value = 0.0;
};

// Global numbering: mesh nodes first, then one scaling center per element.
struct DofMap {
    int dofs_per_point = 3;
    bool with_membrane = false;
    int n_nodes = 0;
    int n_centers = 0;

    int size() const { return (n_nodes + n_centers) * dofs_per_point; }
    int point(int p, Dof d) const;
    int node(int n, Dof d) const { return point(n, d); }
    int center(int e, Dof d) const { return point(n_nodes + e, d); }
};

struct GlobalSystem {
    Eigen::SparseMatrix<double> k;
    Eigen::VectorXd f;
    std::vector<std::pair<int, double>> constraints;  // sorted by DOF, unique
    DofMap dofs;
};

struct AssemblyOptions {
    StiffnessOptions stiffness;
    int threads = 1;
};

// Element loop runs in parallel (OpenMP) when threads != 1; contributions are
// scattered in element order, so the result equals the serial assembly.
GlobalSystem assemble_global(const PolyMesh& mesh, const MaterialModel& mat, const std::vector<LoadSpec>& loads,
                             const std::vector<BoundaryCondition>& bcs, const AssemblyOptions& opt = {});
GlobalSystem assemble_global_serial(const PolyMesh& mesh, const MaterialModel& mat, const std::vector<LoadSpec>& loads,
                                    const std::vector<BoundaryCondition>& bcs, const AssemblyOptions& opt = {});

// Consistent surface load of one element (pressure and function loads) in local DOFs.
Eigen::VectorXd element_surface_load(const PolyMesh& mesh, int element, const MaterialModel& mat,
                                     const std::vector<LoadSpec>& loads);

struct FieldResult {
    Eigen::VectorXd d;
    DofMap dofs;
    double residual = 0.0;        // ||K d - f|| / ||f|| over free DOFs
    double backward_error = 0.0;  // ||r|| / (max|K| ||d|| + ||f||), infinity norms

    double value(int point, Dof dof) const { return d(dofs.point(point, dof)); }
    double node_value(int node, Dof dof) const { return d(dofs.node(node, dof)); }
    double center_value(int element, Dof dof) const { return d(dofs.center(element, dof)); }
};

FieldResult solve(const GlobalSystem& system);

// Section DOF vector (node1, node2, center blocks) gathered from a solution.
Eigen::VectorXd gather_section_dofs(const FieldResult& sol, const Section& s);

}  // namespace plateforge
