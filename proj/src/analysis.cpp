#include "plateforge/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "plateforge/errors.hpp"
#include "plateforge/geometry.hpp"
#include "plateforge/quadrature.hpp"

namespace plateforge {

EigenReport eigen_report(const Eigen::MatrixXd& k, double tol_rel) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (k + k.transpose()), Eigen::EigenvaluesOnly);
    EigenReport r;
    r.tol_rel = tol_rel;
    r.eigenvalues.assign(eig.eigenvalues().data(), eig.eigenvalues().data() + eig.eigenvalues().size());
    double lmax = 0.0;
    for (double l : r.eigenvalues) lmax = std::max(lmax, std::abs(l));
    for (double l : r.eigenvalues)
        if (std::abs(l) <= tol_rel * lmax) ++r.zero_count;
    return r;
}

EigenReport zero_energy_mode_test(const PolyMesh& element, const MaterialModel& mat, const StiffnessOptions& opt,
                                  double tol_rel) {
    if (element.num_elements() != 1) throw ArgumentError("zero-energy test expects a one-element mesh");
    const ElementStiffness es = element_stiffness(element, 0, mat, opt, true);
    return eigen_report(es.k_e, tol_rel);
}

// Exact solutions ------------------------------------------------------------

ExactSolution cantilever_moment_solution(double m, double E, double t) {
    const double ei = E * t * t * t / 12.0;
    ExactSolution s;
    s.name = "cantilever-moment";
    s.v = [=](const Vec2& p) { return Vec3(-m * p.x() * p.x() / (2.0 * ei), m * p.x() / ei, 0.0); };
    s.grad = [=](const Vec2& p) {
        Eigen::Matrix<double, 3, 2> g = Eigen::Matrix<double, 3, 2>::Zero();
        g(0, 0) = -m * p.x() / ei;
        g(1, 0) = m / ei;
        return g;
    };
    return s;
}

double cantilever_moment_reference(double m, double L, double E, double t) {
    return -m * L * L / (2.0 * E * t * t * t / 12.0);
}

ExactSolution cantilever_udl_solution(double q, double L, double E, double nu, double t, double k) {
    const double ei = E * t * t * t / 12.0;
    const double kgt = k * E / (2.0 * (1.0 + nu)) * t;
    ExactSolution s;
    s.name = "cantilever-udl";
    s.v = [=](const Vec2& p) {
        const double x = p.x();
        const double wb = q / (24.0 * ei) * (x * x * x * x - 4.0 * L * x * x * x + 6.0 * L * L * x * x);
        const double ws = q * (L * x - 0.5 * x * x) / kgt;
        const double wbx = q / (24.0 * ei) * (4.0 * x * x * x - 12.0 * L * x * x + 12.0 * L * L * x);
        return Vec3(wb + ws, -wbx, 0.0);
    };
    s.grad = [=](const Vec2& p) {
        const double x = p.x();
        const double wbx = q / (24.0 * ei) * (4.0 * x * x * x - 12.0 * L * x * x + 12.0 * L * L * x);
        const double wbxx = q / (24.0 * ei) * (12.0 * x * x - 24.0 * L * x + 12.0 * L * L);
        Eigen::Matrix<double, 3, 2> g = Eigen::Matrix<double, 3, 2>::Zero();
        g(0, 0) = wbx + q * (L - x) / kgt;
        g(1, 0) = -wbxx;
        return g;
    };
    return s;
}

double cantilever_udl_reference(double q, double L, double E, double nu, double t, double k) {
    const double ei = E * t * t * t / 12.0;
    const double kgt = k * E / (2.0 * (1.0 + nu)) * t;
    return q * L * L * L * L / (8.0 * ei) + q * L * L / (2.0 * kgt);
}

namespace {

// Polynomials of the square-plate solution: A = s^3 (s-1)^3, B = A'/3,
// a = s (s-1) (5 s^2 - 5 s + 1) with B' = 2a.
double poly_A(double s) { return s * s * s * (s - 1.0) * (s - 1.0) * (s - 1.0); }
double poly_B(double s) { return s * s * (s - 1.0) * (s - 1.0) * (2.0 * s - 1.0); }
double poly_a(double s) { return s * (s - 1.0) * (5.0 * s * s - 5.0 * s + 1.0); }
double poly_da(double s) { return 20.0 * s * s * s - 30.0 * s * s + 12.0 * s - 1.0; }

}  // namespace

double square_load_function(double x, double y, double E, double nu, double t) {
    const double d = E * t * t * t / (12.0 * (1.0 - nu * nu));
    const double px = 5.0 * x * x - 5.0 * x + 1.0;
    const double py = 5.0 * y * y - 5.0 * y + 1.0;
    const double term1 = 12.0 * y * (y - 1.0) * px * (2.0 * y * y * (y - 1.0) * (y - 1.0) + x * (x - 1.0) * py);
    const double term2 = 12.0 * x * (x - 1.0) * py * (2.0 * x * x * (x - 1.0) * (x - 1.0) + y * (y - 1.0) * px);
    return d * (term1 + term2);
}

ExactSolution square_load_function_solution(double nu, double t) {
    const double c = 2.0 * t * t / (5.0 * (1.0 - nu));
    ExactSolution s;
    s.name = "square-load-function";
    s.v = [=](const Vec2& p) {
        const double x = p.x(), y = p.y();
        const double w = poly_A(x) * poly_A(y) / 3.0 - c * (poly_A(y) * poly_a(x) + poly_A(x) * poly_a(y));
        return Vec3(w, -poly_A(y) * poly_B(x), poly_A(x) * poly_B(y));
    };
    s.grad = [=](const Vec2& p) {
        const double x = p.x(), y = p.y();
        Eigen::Matrix<double, 3, 2> g;
        g(0, 0) = poly_B(x) * poly_A(y) - c * (poly_A(y) * poly_da(x) + 3.0 * poly_B(x) * poly_a(y));
        g(0, 1) = poly_A(x) * poly_B(y) - c * (3.0 * poly_B(y) * poly_a(x) + poly_A(x) * poly_da(y));
        g(1, 0) = -2.0 * poly_A(y) * poly_a(x);
        g(1, 1) = -3.0 * poly_B(y) * poly_B(x);
        g(2, 0) = 3.0 * poly_B(x) * poly_B(y);
        g(2, 1) = 2.0 * poly_A(x) * poly_a(y);
        return g;
    };
    return s;
}

ExactSolution clamped_circular_solution(double q, double E, double nu, double t, double k) {
    const double d = E * t * t * t / (12.0 * (1.0 - nu * nu));
    const double lambda = k * E * t * t * t / (2.0 * (1.0 + nu));
    const double c = t * t / (4.0 * lambda);
    ExactSolution s;
    s.name = "clamped-circular";
    s.v = [=](const Vec2& p) {
        const double r2 = p.squaredNorm();
        const double w = r2 * r2 / (64.0 * d) - r2 * (c + 1.0 / (32.0 * d)) + c + 1.0 / (64.0 * d);
        const double f = (r2 - 1.0) / (16.0 * d);
        return Vec3(q * w, -q * f * p.x(), q * f * p.y());
    };
    s.grad = [=](const Vec2& p) {
        const double r2 = p.squaredNorm();
        const double dw = 4.0 * r2 / (64.0 * d) - 2.0 * (c + 1.0 / (32.0 * d));  // dw/dx = dw * x
        const double f = (r2 - 1.0) / (16.0 * d);
        const double fx = 2.0 * p.x() / (16.0 * d), fy = 2.0 * p.y() / (16.0 * d);
        Eigen::Matrix<double, 3, 2> g;
        g(0, 0) = q * dw * p.x();
        g(0, 1) = q * dw * p.y();
        g(1, 0) = -q * (f + fx * p.x());
        g(1, 1) = -q * fy * p.x();
        g(2, 0) = q * fx * p.y();
        g(2, 1) = q * (f + fy * p.y());
        return g;
    };
    return s;
}

double clamped_square_udl_reference(double q, double L, double D) { return 0.00126 * q * L * L * L * L / D; }
double clamped_square_point_reference(double P, double L, double D) { return 0.0056 * P * L * L / D; }

// Error norms ------------------------------------------------------------------

namespace {

struct NormPartial {
    double l2_err = 0.0, l2_ref = 0.0, h1_err = 0.0, h1_ref = 0.0, en_err = 0.0, en_ref = 0.0;
};

// Interpolated (w, beta_x, beta_y), their gradients and generalized strains at a section point.
struct PointState {
    Vec3 v;
    Eigen::Matrix<double, 3, 2> grad;
    Eigen::Vector3d kappa;
    Eigen::Vector2d gamma;
};

PointState section_state(const Eigen::VectorXd& dsec, int nd, int off, const Section& s, double xi, double eta,
                         Formulation f) {
    const SectionFrame fr = eval_section_frame(s, xi, eta);
    const Eigen::Vector3d n = section_shape_values(xi, eta);
    const Eigen::Matrix<double, 2, 3> g = section_shape_gradients(fr, eta);
    Eigen::Matrix<double, 9, 1> dp;
    for (int a = 0; a < 3; ++a)
        for (int k = 0; k < 3; ++k) dp(3 * a + k) = dsec(a * nd + off + k);
    PointState st;
    st.v.setZero();
    st.grad.setZero();
    for (int a = 0; a < 3; ++a) {
        const Vec3 va = dp.segment<3>(3 * a);
        st.v += n(a) * va;
        st.grad += va * g.col(a).transpose();
    }
    st.kappa = Eigen::Vector3d(st.grad(1, 0), -st.grad(2, 1), st.grad(1, 1) - st.grad(2, 0));
    st.gamma = shear_operator(s, xi, eta, f) * dp;
    return st;
}

NormPartial element_norms(const FieldResult& sol, const ExactSolution& exact, const PolyMesh& mesh, int e,
                          const PlateMaterial2D& pm, const NormOptions& opt) {
    const int nd = sol.dofs.dofs_per_point;
    const int off = dof_index(Dof::W, sol.dofs.with_membrane);
    NormPartial acc;
    const auto rule = section_rule(opt.order, opt.order);
    for (const Section& s : decompose_into_sections(mesh, e)) {
        const Eigen::VectorXd dsec = gather_section_dofs(sol, s);
        for (const auto& q : rule) {
            const double w = q.weight * eval_section_frame(s, q.xi, q.eta).det_jacobian();
            const PointState h = section_state(dsec, nd, off, s, q.xi, q.eta, opt.stiffness.formulation);
            const Vec2 x = map_to_physical(s, q.xi, q.eta);
            const Vec3 v = exact.v(x);
            const Eigen::Matrix<double, 3, 2> g = exact.grad(x);
            acc.l2_err += w * (v - h.v).squaredNorm();
            acc.l2_ref += w * v.squaredNorm();
            acc.h1_err += w * (g - h.grad).squaredNorm();
            acc.h1_ref += w * g.squaredNorm();
            const Eigen::Vector3d kappa(g(1, 0), -g(2, 1), g(1, 1) - g(2, 0));
            const Eigen::Vector2d gamma(g(0, 0) + v(1), g(0, 1) - v(2));
            const Eigen::Vector3d dk = kappa - h.kappa;
            const Eigen::Vector2d dg = gamma - h.gamma;
            acc.en_err += w * (dk.dot(pm.c_b * dk) + dg.dot(pm.c_s * dg));
            acc.en_ref += w * (kappa.dot(pm.c_b * kappa) + gamma.dot(pm.c_s * gamma));
        }
    }
    return acc;
}

NormReport finish_norms(const std::vector<NormPartial>& parts, int n_elements) {
    NormPartial t;
    for (const auto& p : parts) {
        t.l2_err += p.l2_err;
        t.l2_ref += p.l2_ref;
        t.h1_err += p.h1_err;
        t.h1_ref += p.h1_ref;
        t.en_err += p.en_err;
        t.en_ref += p.en_ref;
    }
    auto ratio = [](double a, double b) { return b > 0.0 ? std::sqrt(a / b) : std::sqrt(a); };
    NormReport r;
    r.l2_rel = ratio(t.l2_err, t.l2_ref);
    r.h1s_rel = ratio(t.h1_err, t.h1_ref);
    r.energy_rel = ratio(t.en_err, t.en_ref);
    r.n_elements = n_elements;
    r.h = 1.0 / std::sqrt(static_cast<double>(n_elements));
    return r;
}

NormReport norms_impl(const FieldResult& sol, const ExactSolution& exact, const PolyMesh& mesh,
                      const MaterialModel& mat, const NormOptions& opt, bool parallel) {
    const PlateMaterial2D pm = mat.plate();
    const int ne = mesh.num_elements();
    std::vector<NormPartial> parts(static_cast<std::size_t>(ne));
    std::vector<std::string> errors(static_cast<std::size_t>(ne));
    auto work = [&](int e) {
        try {
            parts[static_cast<std::size_t>(e)] = element_norms(sol, exact, mesh, e, pm, opt);
        } catch (const std::exception& ex) {
            errors[static_cast<std::size_t>(e)] = ex.what();
        }
    };
#ifdef _OPENMP
    if (parallel) {
        const int threads = opt.threads > 0 ? opt.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
        for (int e = 0; e < ne; ++e) work(e);
    } else {
        for (int e = 0; e < ne; ++e) work(e);
    }
#else
    (void)parallel;
    for (int e = 0; e < ne; ++e) work(e);
#endif
    for (int e = 0; e < ne; ++e)
        if (!errors[static_cast<std::size_t>(e)].empty())
            throw Error("norm evaluation failed in element " + std::to_string(e) + ": " + errors[static_cast<std::size_t>(e)]);
    return finish_norms(parts, ne);
}

}  // namespace

NormReport error_norms(const FieldResult& sol, const ExactSolution& exact, const PolyMesh& mesh,
                       const MaterialModel& mat, const NormOptions& opt) {
    return norms_impl(sol, exact, mesh, mat, opt, opt.threads != 1);
}

NormReport error_norms_serial(const FieldResult& sol, const ExactSolution& exact, const PolyMesh& mesh,
                              const MaterialModel& mat, const NormOptions& opt) {
    return norms_impl(sol, exact, mesh, mat, opt, false);
}

// Stress resultants ------------------------------------------------------------

StressResultants section_resultants(const FieldResult& sol, const Section& s, const MaterialModel& mat,
                                    const StiffnessOptions& opt, double xi, double eta) {
    xi = std::clamp(xi, 1e-12, 1.0);
    eta = std::clamp(eta, -1.0, 1.0);
    const Eigen::VectorXd dsec = gather_section_dofs(sol, s);
    StressResultants r;
    if (mat.law == MaterialLaw::Plate2D) {
        const PlateMaterial2D pm = mat.plate();
        const auto op = eval_standard_operators(s, xi, eta, false);
        const Eigen::Matrix<double, 9, 1> dp = dsec.head<9>();
        r.m = pm.c_b * (op.b_b * dp);
        r.q = pm.c_s * (shear_operator(s, xi, eta, opt.formulation) * dp);
        return r;
    }
    const IntegratedThicknessBlocks tb = mat.blocks();
    const Eigen::Matrix<double, 15, 1> d15 = dsec.head<15>();
    const Eigen::Matrix<double, 8, 1> eps = generalized_operator(s, xi, eta, opt.formulation) * d15;
    const Eigen::VectorXd ez = thickness_strain_map(s, mat, opt) * dsec;
    const Eigen::Matrix<double, 8, 1> sig = tb.d11 * eps + tb.d12 * ez;
    r.n = sig.segment<3>(0);
    r.m = sig.segment<3>(3);
    r.q = sig.segment<2>(6);
    return r;
}

std::vector<StressResultants> recover_nodal_resultants(const FieldResult& sol, const PolyMesh& mesh,
                                                       const MaterialModel& mat, const StiffnessOptions& opt) {
    std::vector<StressResultants> acc(static_cast<std::size_t>(mesh.num_nodes()));
    std::vector<int> count(static_cast<std::size_t>(mesh.num_nodes()), 0);
    for (int e = 0; e < mesh.num_elements(); ++e) {
        for (const Section& s : decompose_into_sections(mesh, e)) {
            const StressResultants r1 = section_resultants(sol, s, mat, opt, 1.0, -1.0);
            const StressResultants r2 = section_resultants(sol, s, mat, opt, 1.0, 1.0);
            for (const auto& [node, r] : {std::pair{s.slots[0], r1}, std::pair{s.slots[1], r2}}) {
                auto& a = acc[static_cast<std::size_t>(node)];
                a.n += r.n;
                a.m += r.m;
                a.q += r.q;
                ++count[static_cast<std::size_t>(node)];
            }
        }
    }
    for (std::size_t i = 0; i < acc.size(); ++i) {
        if (count[i] == 0) continue;
        acc[i].n /= count[i];
        acc[i].m /= count[i];
        acc[i].q /= count[i];
    }
    return acc;
}

std::vector<StressResultants> recover_element_resultants(const FieldResult& sol, const PolyMesh& mesh,
                                                         const MaterialModel& mat, const StiffnessOptions& opt) {
    std::vector<StressResultants> out(static_cast<std::size_t>(mesh.num_elements()));
    for (int e = 0; e < mesh.num_elements(); ++e) {
        StressResultants sum;
        double area = 0.0;
        for (const Section& s : decompose_into_sections(mesh, e)) {
            const double a = s.signed_area();
            const StressResultants r = section_resultants(sol, s, mat, opt, 2.0 / 3.0, 0.0);
            sum.n += a * r.n;
            sum.m += a * r.m;
            sum.q += a * r.q;
            area += a;
        }
        sum.n /= area;
        sum.m /= area;
        sum.q /= area;
        out[static_cast<std::size_t>(e)] = sum;
    }
    return out;
}

SectionLocation locate(const PolyMesh& mesh, const Vec2& p, double tol) {
    SectionLocation best;
    best.distance = std::numeric_limits<double>::infinity();
    Vec2 best_point = p;
    Section best_section;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto sections = decompose_into_sections(mesh, e);
        for (std::size_t k = 0; k < sections.size(); ++k) {
            const Section& s = sections[k];
            // Closest point of triangle (x0, x1, x2) to p.
            const Vec2 tri[3] = {s.x0, s.x1, s.x2};
            const double area2 = cross2(s.x1 - s.x0, s.x2 - s.x0);
            const double l1 = cross2(p - s.x0, s.x2 - s.x0) / area2;
            const double l2 = cross2(s.x1 - s.x0, p - s.x0) / area2;
            Vec2 c;
            double d;
            if (l1 >= 0.0 && l2 >= 0.0 && l1 + l2 <= 1.0) {
                c = p;
                d = 0.0;
            } else {
                d = std::numeric_limits<double>::infinity();
                for (int i = 0; i < 3; ++i) {
                    const Vec2 a = tri[i], b = tri[(i + 1) % 3];
                    const double u = std::clamp((p - a).dot(b - a) / (b - a).squaredNorm(), 0.0, 1.0);
                    const Vec2 q = a + u * (b - a);
                    if ((q - p).norm() < d) {
                        d = (q - p).norm();
                        c = q;
                    }
                }
            }
            if (d < best.distance) {
                best.distance = d;
                best.element = e;
                best.section = static_cast<int>(k);
                best_point = c;
                best_section = s;
            }
        }
    }
    if (best.element < 0 || best.distance > tol) {
        std::ostringstream msg;
        msg << "point (" << p.x() << ", " << p.y() << ") lies outside the mesh";
        throw LocationError(msg.str());
    }
    const Section& s = best_section;
    const double area2 = cross2(s.x1 - s.x0, s.x2 - s.x0);
    const double l1 = cross2(best_point - s.x0, s.x2 - s.x0) / area2;
    const double l2 = cross2(s.x1 - s.x0, best_point - s.x0) / area2;
    best.xi = std::clamp(l1 + l2, 0.0, 1.0);
    best.eta = best.xi > 0.0 ? std::clamp((l2 - l1) / best.xi, -1.0, 1.0) : 0.0;
    return best;
}

StressResultants probe_resultants(const FieldResult& sol, const PolyMesh& mesh, const MaterialModel& mat,
                                  const StiffnessOptions& opt, const Vec2& p, double tol) {
    const SectionLocation loc = locate(mesh, p, tol);
    const auto sections = decompose_into_sections(mesh, loc.element);
    return section_resultants(sol, sections[static_cast<std::size_t>(loc.section)], mat, opt, loc.xi, loc.eta);
}

Vec3 probe_field(const FieldResult& sol, const PolyMesh& mesh, const Vec2& p, double tol) {
    const SectionLocation loc = locate(mesh, p, tol);
    const auto sections = decompose_into_sections(mesh, loc.element);
    const Section& s = sections[static_cast<std::size_t>(loc.section)];
    const Eigen::VectorXd dsec = gather_section_dofs(sol, s);
    const int nd = sol.dofs.dofs_per_point;
    const int off = dof_index(Dof::W, sol.dofs.with_membrane);
    const Eigen::Vector3d n = section_shape_values(loc.xi, loc.eta);
    Vec3 v = Vec3::Zero();
    for (int a = 0; a < 3; ++a) v += n(a) * dsec.segment(a * nd + off, 3);
    return v;
}

RateFit fit_convergence_rate(const std::vector<std::pair<double, double>>& h_error) {
    if (h_error.size() < 3) throw ArgumentError("a rate fit needs at least 3 points");
    const double n = static_cast<double>(h_error.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (const auto& [h, e] : h_error) {
        if (!(h > 0.0) || !(e > 0.0)) throw ArgumentError("rate fit inputs must be positive");
        const double x = std::log(h), y = std::log(e);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    const double den = n * sxx - sx * sx;
    if (!(std::abs(den) > 0.0)) throw ArgumentError("rate fit needs distinct mesh sizes");
    RateFit r;
    r.slope = (n * sxy - sx * sy) / den;
    r.intercept = (sy - r.slope * sx) / n;
    const double ss_tot = syy - sy * sy / n;
    double ss_res = 0.0;
    for (const auto& [h, e] : h_error) {
        const double res = std::log(e) - (r.intercept + r.slope * std::log(h));
        ss_res += res * res;
    }
    r.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return r;
}

}  // namespace plateforge
