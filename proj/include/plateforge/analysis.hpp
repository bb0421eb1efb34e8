#pragma once

#include <Eigen/Core>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "plateforge/assembly.hpp"

namespace plateforge {

// Zero-energy mode test ------------------------------------------------------

struct EigenReport {
    std::vector<double> eigenvalues;  // ascending
    int zero_count = 0;
    double tol_rel = 1e-8;
};

EigenReport eigen_report(const Eigen::MatrixXd& k, double tol_rel = 1e-8);

// Eigen-decomposition of the center-condensed stiffness of a one-element mesh.
EigenReport zero_energy_mode_test(const PolyMesh& element, const MaterialModel& mat,
                                  const StiffnessOptions& opt = {}, double tol_rel = 1e-8);

// Exact solutions --------------------------------------------------------------

// v = (w, beta_x, beta_y) and its gradient (rows w, beta_x, beta_y; columns d/dx, d/dy).
struct ExactSolution {
    std::string name;
    std::function<Vec3(const Vec2&)> v;
    std::function<Eigen::Matrix<double, 3, 2>(const Vec2&)> grad;
};

// Tip moment m per unit width on a cantilever clamped at x = 0 (EI per unit width = E t^3 / 12).
ExactSolution cantilever_moment_solution(double m, double E, double t);
double cantilever_moment_reference(double m, double L, double E, double t);

// Timoshenko beam under a uniform load q per unit area, clamped at x = 0, free at x = L.
ExactSolution cantilever_udl_solution(double q, double L, double E, double nu, double t, double k);
double cantilever_udl_reference(double q, double L, double E, double nu, double t, double k);

// Clamped unit square under the polynomial load function.
double square_load_function(double x, double y, double E, double nu, double t);
ExactSolution square_load_function_solution(double nu, double t);

// Clamped circular plate of radius 1 under uniform load q.
ExactSolution clamped_circular_solution(double q, double E, double nu, double t, double k);

// Thin clamped square plate: centre deflection under uniform load and central point load.
double clamped_square_udl_reference(double q, double L, double D);
double clamped_square_point_reference(double P, double L, double D);

// Error norms -------------------------------------------------------------------

struct NormReport {
    double l2_rel = 0.0;
    double h1s_rel = 0.0;
    double energy_rel = 0.0;
    double h = 0.0;  // 1 / sqrt(n_elements)
    int n_elements = 0;
};

struct NormOptions {
    StiffnessOptions stiffness;  // formulation selects the shear strains of the energy norm
    int order = 3;               // Gauss points per direction and section
    int threads = 1;
};

NormReport error_norms(const FieldResult& sol, const ExactSolution& exact, const PolyMesh& mesh,
                       const MaterialModel& mat, const NormOptions& opt = {});
NormReport error_norms_serial(const FieldResult& sol, const ExactSolution& exact, const PolyMesh& mesh,
                              const MaterialModel& mat, const NormOptions& opt = {});

// Stress resultants and probes -------------------------------------------------

struct StressResultants {
    Eigen::Vector3d n = Eigen::Vector3d::Zero();  // membrane forces (Solid3D only)
    Eigen::Vector3d m = Eigen::Vector3d::Zero();  // m_xx, m_yy, m_xy
    Eigen::Vector2d q = Eigen::Vector2d::Zero();  // q_x, q_y
};

struct SectionLocation {
    int element = -1;
    int section = -1;
    double xi = 0.0;
    double eta = 0.0;
    double distance = 0.0;  // distance from the query point to the located section
};

// Section containing p; points within tol of the mesh are clamped onto it.
SectionLocation locate(const PolyMesh& mesh, const Vec2& p, double tol);

StressResultants section_resultants(const FieldResult& sol, const Section& s, const MaterialModel& mat,
                                    const StiffnessOptions& opt, double xi, double eta);

// Nodal values by unweighted averaging over adjacent sections (nodes only, not centers).
std::vector<StressResultants> recover_nodal_resultants(const FieldResult& sol, const PolyMesh& mesh,
                                                       const MaterialModel& mat, const StiffnessOptions& opt);
// One area-weighted value per element.
std::vector<StressResultants> recover_element_resultants(const FieldResult& sol, const PolyMesh& mesh,
                                                         const MaterialModel& mat, const StiffnessOptions& opt);
StressResultants probe_resultants(const FieldResult& sol, const PolyMesh& mesh, const MaterialModel& mat,
                                  const StiffnessOptions& opt, const Vec2& p, double tol);
Vec3 probe_field(const FieldResult& sol, const PolyMesh& mesh, const Vec2& p, double tol);

// Convergence rates -------------------------------------------------------------

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;  // natural log
    double r2 = 0.0;
};

RateFit fit_convergence_rate(const std::vector<std::pair<double, double>>& h_error);

}  // namespace plateforge
