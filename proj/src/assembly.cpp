#include "plateforge/assembly.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "plateforge/errors.hpp"
#include "plateforge/geometry.hpp"

namespace plateforge {

std::string to_string(Formulation f) { return f == Formulation::ANS ? "ans" : "standard"; }

std::string to_string(QuadratureScheme q) {
    switch (q) {
        case QuadratureScheme::Full: return "full";
        case QuadratureScheme::Reduced: return "reduced";
        case QuadratureScheme::SelectiveReduced: return "selective";
    }
    return "full";
}

std::vector<QuadPoint> bending_rule(const StiffnessOptions& opt) {
    if (opt.scheme == QuadratureScheme::Reduced) return section_rule(1, 1);
    return section_rule(opt.full_order, opt.full_order);
}

std::vector<QuadPoint> shear_rule(const StiffnessOptions& opt) {
    if (opt.scheme == QuadratureScheme::Full) return section_rule(opt.full_order, opt.full_order);
    return section_rule(1, 1);
}

Eigen::Matrix<double, 2, 9> shear_operator(const Section& s, double xi, double eta, Formulation f) {
    if (f == Formulation::ANS) return eval_ans_shear_operator(s, xi, eta);
    return eval_standard_operators(s, xi, eta, false).b_s;
}

SectionStiffnessParts plate_section_parts(const Section& s, const PlateMaterial2D& mat, const StiffnessOptions& opt) {
    SectionStiffnessParts p;
    p.k_b.setZero();
    p.k_s.setZero();
    for (const auto& q : bending_rule(opt)) {
        const SectionFrame fr = eval_section_frame(s, q.xi, q.eta);
        const auto op = eval_standard_operators(s, q.xi, q.eta, false);
        p.k_b.noalias() += (q.weight * fr.det_jacobian()) * (op.b_b.transpose() * mat.c_b * op.b_b);
    }
    for (const auto& q : shear_rule(opt)) {
        const SectionFrame fr = eval_section_frame(s, q.xi, q.eta);
        const auto bs = shear_operator(s, q.xi, q.eta, opt.formulation);
        p.k_s.noalias() += (q.weight * fr.det_jacobian()) * (bs.transpose() * mat.c_s * bs);
    }
    return p;
}

Eigen::Matrix<double, 8, 15> generalized_operator(const Section& s, double xi, double eta, Formulation f) {
    const auto op = eval_standard_operators(s, xi, eta, true);
    const auto bs = shear_operator(s, xi, eta, f);
    Eigen::Matrix<double, 8, 15> b = Eigen::Matrix<double, 8, 15>::Zero();
    for (int a = 0; a < 3; ++a) {
        b.block<3, 2>(0, 5 * a) = op.b_m.block<3, 2>(0, 2 * a);
        b.block<3, 3>(3, 5 * a + 2) = op.b_b.block<3, 3>(0, 3 * a);
        b.block<2, 3>(6, 5 * a + 2) = bs.block<2, 3>(0, 3 * a);
    }
    return b;
}

namespace {

struct Solid3DParts {
    Eigen::Matrix<double, 15, 15> k_dd;
    Eigen::MatrixXd k_zd;
    Eigen::MatrixXd k_zz;
};

Solid3DParts solid3d_parts(const Section& s, const MaterialModel& mat, const StiffnessOptions& opt) {
    const IntegratedThicknessBlocks tb = mat.blocks();
    const int m = static_cast<int>(tb.d22.rows());
    Solid3DParts p;
    p.k_dd.setZero();
    p.k_zd = Eigen::MatrixXd::Zero(m, 15);
    double area = 0.0;
    // Membrane/bending rows (0..5) use the bending rule, shear rows (6, 7) the shear
    // rule; the isotropic blocks do not couple shear with the other rows.
    const Eigen::Matrix<double, 6, 6> d_mb = tb.d11.topLeftCorner<6, 6>();
    const Eigen::Matrix2d d_ss = tb.d11.bottomRightCorner<2, 2>();
    const Eigen::MatrixXd d12_mb = tb.d12.topRows(6);
    for (const auto& q : bending_rule(opt)) {
        const SectionFrame fr = eval_section_frame(s, q.xi, q.eta);
        const double w = q.weight * fr.det_jacobian();
        const auto b = generalized_operator(s, q.xi, q.eta, opt.formulation);
        const Eigen::Matrix<double, 6, 15> bmb = b.topRows<6>();
        p.k_dd.noalias() += w * (bmb.transpose() * d_mb * bmb);
        p.k_zd.noalias() += w * (d12_mb.transpose() * bmb);
        area += w;
    }
    for (const auto& q : shear_rule(opt)) {
        const SectionFrame fr = eval_section_frame(s, q.xi, q.eta);
        const double w = q.weight * fr.det_jacobian();
        const auto b = generalized_operator(s, q.xi, q.eta, opt.formulation);
        const Eigen::Matrix<double, 2, 15> bs = b.bottomRows<2>();
        p.k_dd.noalias() += w * (bs.transpose() * d_ss * bs);
    }
    p.k_zz = tb.d22 * area;
    return p;
}

}  // namespace

Eigen::MatrixXd section_stiffness(const Section& s, const MaterialModel& mat, const StiffnessOptions& opt) {
    if (mat.law == MaterialLaw::Plate2D) {
        const auto p = plate_section_parts(s, mat.plate(), opt);
        return p.k_b + p.k_s;
    }
    const Solid3DParts p = solid3d_parts(s, mat, opt);
    Eigen::LLT<Eigen::MatrixXd> llt(p.k_zz);
    if (llt.info() != Eigen::Success) throw MaterialError("thickness-strain block is not positive definite");
    Eigen::MatrixXd k = p.k_dd - p.k_zd.transpose() * llt.solve(p.k_zd);
    return 0.5 * (k + k.transpose());
}

Eigen::MatrixXd thickness_strain_map(const Section& s, const MaterialModel& mat, const StiffnessOptions& opt) {
    if (mat.law != MaterialLaw::Solid3D) throw ArgumentError("thickness strains exist only for the 3D material law");
    const Solid3DParts p = solid3d_parts(s, mat, opt);
    Eigen::LLT<Eigen::MatrixXd> llt(p.k_zz);
    if (llt.info() != Eigen::Success) throw MaterialError("thickness-strain block is not positive definite");
    return -llt.solve(p.k_zd);
}

Eigen::MatrixXd condense(const Eigen::MatrixXd& k, int n_keep) {
    const int n = static_cast<int>(k.rows());
    const int nc = n - n_keep;
    if (n_keep < 0 || nc < 0) throw ArgumentError("invalid condensation split");
    if (nc == 0) return k;
    const Eigen::MatrixXd kcc = k.bottomRightCorner(nc, nc);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(kcc);
    const double scale = kcc.diagonal().cwiseAbs().maxCoeff();
    if (ldlt.info() != Eigen::Success || !(scale > 0.0) ||
        ldlt.vectorD().cwiseAbs().minCoeff() <= 1e-13 * scale)
        throw CondensationError("scaling-center block is singular");
    Eigen::MatrixXd out = k.topLeftCorner(n_keep, n_keep) - k.topRightCorner(n_keep, nc) * ldlt.solve(k.bottomLeftCorner(nc, n_keep));
    return 0.5 * (out + out.transpose());
}

ElementStiffness element_stiffness(const PolyMesh& mesh, int element, const MaterialModel& mat,
                                   const StiffnessOptions& opt, bool condense_center) {
    const auto sections = decompose_into_sections(mesh, element);
    const int n = static_cast<int>(sections.size());
    const int nd = mat.dofs_per_point();
    ElementStiffness es;
    es.n_boundary_nodes = n;
    es.dofs_per_point = nd;
    es.k_e = Eigen::MatrixXd::Zero((n + 1) * nd, (n + 1) * nd);
    for (int i = 0; i < n; ++i) {
        const Eigen::MatrixXd ks = section_stiffness(sections[static_cast<std::size_t>(i)], mat, opt);
        const int pts[3] = {i, (i + 1) % n, n};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) es.k_e.block(pts[a] * nd, pts[b] * nd, nd, nd) += ks.block(a * nd, b * nd, nd, nd);
    }
    es.k_e = 0.5 * (es.k_e + es.k_e.transpose());
    es.f_e = Eigen::VectorXd::Zero(es.k_e.rows());
    if (condense_center) {
        es.k_e = condense(es.k_e, n * nd);
        es.f_e = Eigen::VectorXd::Zero(n * nd);
        es.condensed = true;
    }
    return es;
}

bool Selector::matches(const Vec2& p) const {
    switch (kind) {
        case Kind::All: return true;
        case Kind::Point: return (p - a).norm() <= tol;
        case Kind::Line: {
            const Vec2 d = b - a;
            const double len2 = d.squaredNorm();
            const double u = len2 > 0.0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
            return (p - (a + u * d)).norm() <= tol;
        }
        case Kind::Circle: return std::abs((p - a).norm() - radius) <= tol;
        case Kind::Box:
            return p.x() >= a.x() - tol && p.x() <= b.x() + tol && p.y() >= a.y() - tol && p.y() <= b.y() + tol;
    }
    return false;
}

int DofMap::point(int p, Dof d) const {
    const int idx = dof_index(d, with_membrane);
    if (idx < 0) throw ConstraintError("DOF does not exist for this material law");
    if (p < 0 || p >= n_nodes + n_centers) throw ConstraintError("point index out of range");
    return p * dofs_per_point + idx;
}

Eigen::VectorXd element_surface_load(const PolyMesh& mesh, int element, const MaterialModel& mat,
                                     const std::vector<LoadSpec>& loads) {
    const int nd = mat.dofs_per_point();
    const int iw = dof_index(Dof::W, mat.with_membrane());
    const int n = static_cast<int>(mesh.elements[static_cast<std::size_t>(element)].size());
    Eigen::VectorXd f = Eigen::VectorXd::Zero((n + 1) * nd);
    bool any = false;
    for (const auto& l : loads)
        if (std::holds_alternative<UniformPressure>(l) || std::holds_alternative<FunctionLoad>(l)) any = true;
    if (!any) return f;
    const auto sections = decompose_into_sections(mesh, element);
    for (int i = 0; i < n; ++i) {
        const Section& s = sections[static_cast<std::size_t>(i)];
        const int pts[3] = {i, (i + 1) % n, n};
        for (const auto& l : loads) {
            if (const auto* up = std::get_if<UniformPressure>(&l)) {
                for (const auto& q : section_rule(2, 2)) {
                    const double w = q.weight * eval_section_frame(s, q.xi, q.eta).det_jacobian();
                    const Eigen::Vector3d nv = section_shape_values(q.xi, q.eta);
                    for (int a = 0; a < 3; ++a) f(pts[a] * nd + iw) += w * nv(a) * up->q;
                }
            } else if (const auto* fl = std::get_if<FunctionLoad>(&l)) {
                for (const auto& q : section_rule(fl->order, fl->order)) {
                    const double w = q.weight * eval_section_frame(s, q.xi, q.eta).det_jacobian();
                    const Vec2 x = map_to_physical(s, q.xi, q.eta);
                    const double val = fl->f(x.x(), x.y());
                    if (!std::isfinite(val)) throw ArgumentError("load function is not finite on the domain");
                    const Eigen::Vector3d nv = section_shape_values(q.xi, q.eta);
                    for (int a = 0; a < 3; ++a) f(pts[a] * nd + iw) += w * nv(a) * val;
                }
            }
        }
    }
    return f;
}

namespace {

std::vector<int> element_dof_map(const PolyMesh& mesh, int e, const DofMap& dm) {
    const auto& loop = mesh.elements[static_cast<std::size_t>(e)];
    std::vector<int> map;
    map.reserve((loop.size() + 1) * static_cast<std::size_t>(dm.dofs_per_point));
    for (int node : loop)
        for (int k = 0; k < dm.dofs_per_point; ++k) map.push_back(node * dm.dofs_per_point + k);
    for (int k = 0; k < dm.dofs_per_point; ++k) map.push_back((dm.n_nodes + e) * dm.dofs_per_point + k);
    return map;
}

double domain_diameter(const PolyMesh& mesh) {
    Vec2 lo = mesh.nodes.front(), hi = mesh.nodes.front();
    for (const auto& p : mesh.nodes) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    return (hi - lo).norm();
}

void apply_edge_and_point_loads(const PolyMesh& mesh, const MaterialModel& mat, const std::vector<LoadSpec>& loads,
                                const DofMap& dm, Eigen::VectorXd& f) {
    const double diam = domain_diameter(mesh);
    std::vector<BoundaryEdge> edges;
    bool edges_ready = false;
    for (const auto& l : loads) {
        if (const auto* pl = std::get_if<PointLoad>(&l)) {
            int best = -1;
            double best_d = 1e-8 * diam;
            for (int i = 0; i < mesh.num_nodes(); ++i) {
                const double d = (mesh.nodes[static_cast<std::size_t>(i)] - pl->where).norm();
                if (d <= best_d) {
                    best_d = d;
                    best = i;
                }
            }
            if (best < 0) {
                std::ostringstream msg;
                msg << "no mesh node within tolerance of point load at (" << pl->where.x() << ", " << pl->where.y() << ")";
                throw LoadPlacementError(msg.str());
            }
            f(dm.node(best, pl->dof)) += pl->value;
            continue;
        }
        const Selector* sel = nullptr;
        double intensity = 0.0;
        Dof dof = Dof::W;
        if (const auto* ll = std::get_if<LineLoad>(&l)) {
            sel = &ll->edge;
            intensity = ll->intensity;
            dof = ll->dof;
        } else if (const auto* ml = std::get_if<MomentLineLoad>(&l)) {
            sel = &ml->edge;
            intensity = ml->m;
            dof = ml->dof;
        }
        if (!sel) continue;
        if (!edges_ready) {
            edges = boundary_edges(mesh);
            edges_ready = true;
        }
        int matched = 0;
        for (const auto& e : edges) {
            const Vec2& pa = mesh.nodes[static_cast<std::size_t>(e.a)];
            const Vec2& pb = mesh.nodes[static_cast<std::size_t>(e.b)];
            if (!sel->matches(pa) || !sel->matches(pb) || !sel->matches(0.5 * (pa + pb))) continue;
            const double half = 0.5 * (pb - pa).norm() * intensity;
            f(dm.node(e.a, dof)) += half;
            f(dm.node(e.b, dof)) += half;
            ++matched;
        }
        if (matched == 0) throw LoadPlacementError("edge load selector matched no boundary edge");
    }
    (void)mat;
}

std::vector<std::pair<int, double>> collect_constraints(const PolyMesh& mesh, const std::vector<BoundaryCondition>& bcs,
                                                        const DofMap& dm) {
    std::map<int, double> fixed;
    for (const auto& bc : bcs) {
        int matched = 0;
        for (int i = 0; i < mesh.num_nodes(); ++i) {
            if (!bc.where.matches(mesh.nodes[static_cast<std::size_t>(i)])) continue;
            ++matched;
            for (Dof d : bc.dofs) fixed[dm.node(i, d)] = bc.value;
        }
        if (matched == 0) throw ConstraintError("boundary condition selector matched no node");
    }
    return {fixed.begin(), fixed.end()};
}

GlobalSystem assemble_impl(const PolyMesh& mesh, const MaterialModel& mat, const std::vector<LoadSpec>& loads,
                           const std::vector<BoundaryCondition>& bcs, const AssemblyOptions& opt, bool parallel) {
    mat.validate();
    const MeshReport rep = validate_mesh(mesh);
    if (!rep.ok()) throw ArgumentError("invalid mesh: " + rep.issues.front().message);

    GlobalSystem sys;
    sys.dofs.dofs_per_point = mat.dofs_per_point();
    sys.dofs.with_membrane = mat.with_membrane();
    sys.dofs.n_nodes = mesh.num_nodes();
    sys.dofs.n_centers = mesh.num_elements();
    const int ne = mesh.num_elements();

    std::vector<ElementStiffness> elems(static_cast<std::size_t>(ne));
    std::vector<std::string> errors(static_cast<std::size_t>(ne));
    std::vector<int> error_kind(static_cast<std::size_t>(ne), 0);
    std::vector<std::pair<int, int>> degenerate(static_cast<std::size_t>(ne), {-1, -1});
    auto work = [&](int e) {
        try {
            ElementStiffness es = element_stiffness(mesh, e, mat, opt.stiffness, false);
            es.f_e = element_surface_load(mesh, e, mat, loads);
            es.dof_map = element_dof_map(mesh, e, sys.dofs);
            elems[static_cast<std::size_t>(e)] = std::move(es);
        } catch (const DegenerateSectionError& ex) {
            errors[static_cast<std::size_t>(e)] = ex.what();
            error_kind[static_cast<std::size_t>(e)] = 1;
            degenerate[static_cast<std::size_t>(e)] = {ex.element(), ex.edge()};
        } catch (const std::exception& ex) {
            errors[static_cast<std::size_t>(e)] = ex.what();
            error_kind[static_cast<std::size_t>(e)] = 2;
        }
    };
    if (parallel) {
#ifdef _OPENMP
        const int threads = opt.threads > 0 ? opt.threads : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
        for (int e = 0; e < ne; ++e) work(e);
#else
        for (int e = 0; e < ne; ++e) work(e);
#endif
    } else {
        for (int e = 0; e < ne; ++e) work(e);
    }
    for (int e = 0; e < ne; ++e) {
        const auto ue = static_cast<std::size_t>(e);
        if (error_kind[ue] == 1) throw DegenerateSectionError(degenerate[ue].first, degenerate[ue].second, errors[ue]);
        if (error_kind[ue] == 2) throw Error("element " + std::to_string(e) + ": " + errors[ue]);
    }

    std::size_t nnz = 0;
    for (const auto& es : elems) nnz += static_cast<std::size_t>(es.k_e.size());
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(nnz);
    sys.f = Eigen::VectorXd::Zero(sys.dofs.size());
    for (const auto& es : elems) {
        const auto& map = es.dof_map;
        for (std::size_t j = 0; j < map.size(); ++j) {
            for (std::size_t i = 0; i < map.size(); ++i) {
                const double v = es.k_e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
                if (v != 0.0) trip.emplace_back(map[i], map[j], v);
            }
            sys.f(map[j]) += es.f_e(static_cast<Eigen::Index>(j));
        }
    }
    sys.k.resize(sys.dofs.size(), sys.dofs.size());
    sys.k.setFromTriplets(trip.begin(), trip.end());
    apply_edge_and_point_loads(mesh, mat, loads, sys.dofs, sys.f);
    sys.constraints = collect_constraints(mesh, bcs, sys.dofs);
    return sys;
}

}  // namespace

GlobalSystem assemble_global(const PolyMesh& mesh, const MaterialModel& mat, const std::vector<LoadSpec>& loads,
                             const std::vector<BoundaryCondition>& bcs, const AssemblyOptions& opt) {
    return assemble_impl(mesh, mat, loads, bcs, opt, opt.threads != 1);
}

GlobalSystem assemble_global_serial(const PolyMesh& mesh, const MaterialModel& mat, const std::vector<LoadSpec>& loads,
                                    const std::vector<BoundaryCondition>& bcs, const AssemblyOptions& opt) {
    return assemble_impl(mesh, mat, loads, bcs, opt, false);
}

FieldResult solve(const GlobalSystem& sys) {
    const int n = sys.dofs.size();
    if (sys.k.rows() != n || sys.f.size() != n) throw ArgumentError("system size mismatch");
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
    std::vector<int> free_index(static_cast<std::size_t>(n), 0);
    for (const auto& [dof, val] : sys.constraints) {
        if (dof < 0 || dof >= n) throw ConstraintError("constraint on a nonexistent DOF");
        free_index[static_cast<std::size_t>(dof)] = -1;
        d(dof) = val;
    }
    int nf = 0;
    for (int i = 0; i < n; ++i)
        if (free_index[static_cast<std::size_t>(i)] == 0) free_index[static_cast<std::size_t>(i)] = nf++;

    Eigen::VectorXd rhs(nf);
    for (int i = 0; i < n; ++i)
        if (free_index[static_cast<std::size_t>(i)] >= 0) rhs(free_index[static_cast<std::size_t>(i)]) = sys.f(i);
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<std::size_t>(sys.k.nonZeros()));
    for (int col = 0; col < sys.k.outerSize(); ++col) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(sys.k, col); it; ++it) {
            const int fi = free_index[static_cast<std::size_t>(it.row())];
            const int fj = free_index[static_cast<std::size_t>(it.col())];
            if (fi >= 0 && fj >= 0) trip.emplace_back(fi, fj, it.value());
            else if (fi >= 0 && fj < 0) rhs(fi) -= it.value() * d(it.col());
        }
    }
    Eigen::SparseMatrix<double> kff(nf, nf);
    kff.setFromTriplets(trip.begin(), trip.end());

    FieldResult res;
    res.dofs = sys.dofs;
    if (nf > 0) {
        Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
        ldlt.compute(kff);
        double min_pivot = 0.0, max_pivot = 0.0;
        if (ldlt.info() == Eigen::Success) {
            const Eigen::VectorXd piv = ldlt.vectorD();
            min_pivot = piv.minCoeff();
            max_pivot = piv.cwiseAbs().maxCoeff();
        }
        if (ldlt.info() != Eigen::Success || !(min_pivot > 1e-15 * max_pivot)) {
            std::ostringstream msg;
            msg << "factorization failed: stiffness is singular or indefinite (smallest pivot " << min_pivot << ")";
            throw SolverError(msg.str(), min_pivot);
        }
        Eigen::VectorXd x = ldlt.solve(rhs);
        const double fn = rhs.norm();
        Eigen::VectorXd r = rhs - kff * x;
        // Iterative refinement for badly scaled (thin-plate) systems.
        for (int it = 0; it < 5 && fn > 0.0 && r.norm() > 1e-13 * fn; ++it) {
            x += ldlt.solve(r);
            r = rhs - kff * x;
        }
        for (int i = 0; i < n; ++i)
            if (free_index[static_cast<std::size_t>(i)] >= 0) d(i) = x(free_index[static_cast<std::size_t>(i)]);
        res.residual = fn > 0.0 ? r.norm() / fn : r.norm();
        // Very thin plates push ||K|| ||x|| / ||f|| past 1e9, where the relative residual
        // is bounded by rounding; accept a small normwise backward error there.
        double knorm = 0.0;
        for (int col = 0; col < kff.outerSize(); ++col)
            for (Eigen::SparseMatrix<double>::InnerIterator it(kff, col); it; ++it) knorm = std::max(knorm, std::abs(it.value()));
        const double backward = r.lpNorm<Eigen::Infinity>() /
                                (knorm * x.lpNorm<Eigen::Infinity>() + rhs.lpNorm<Eigen::Infinity>() + 1e-300);
        res.backward_error = backward;
        if (!(res.residual <= 1e-9) && fn > 0.0 && !(backward <= 1e-13)) {
            std::ostringstream msg;
            msg << "solution residual " << res.residual << " exceeds tolerance";
            throw SolverError(msg.str(), min_pivot);
        }
    }
    res.d = std::move(d);
    return res;
}

Eigen::VectorXd gather_section_dofs(const FieldResult& sol, const Section& s) {
    const int nd = sol.dofs.dofs_per_point;
    Eigen::VectorXd v(3 * nd);
    const int pts[3] = {s.slots[0], s.slots[1], sol.dofs.n_nodes + s.slots[2]};
    for (int a = 0; a < 3; ++a)
        for (int k = 0; k < nd; ++k) v(a * nd + k) = sol.d(pts[a] * nd + k);
    return v;
}

}  // namespace plateforge
