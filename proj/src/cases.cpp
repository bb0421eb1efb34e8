#include "plateforge/cases.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "plateforge/errors.hpp"

namespace plateforge {

// Parsing ---------------------------------------------------------------------

std::string to_string(MeshKind k) {
    switch (k) {
        case MeshKind::Quad: return "quad";
        case MeshKind::Tri: return "tri";
        case MeshKind::Poly: return "poly";
    }
    return "?";
}

std::string to_string(SupportKind k) { return k == SupportKind::Hard ? "hard" : "soft"; }

MeshKind parse_mesh_kind(const std::string& s) {
    if (s == "quad") return MeshKind::Quad;
    if (s == "tri") return MeshKind::Tri;
    if (s == "poly") return MeshKind::Poly;
    throw ArgumentError("unknown mesh kind '" + s + "' (quad|tri|poly)");
}

SupportKind parse_support(const std::string& s) {
    if (s == "hard") return SupportKind::Hard;
    if (s == "soft") return SupportKind::Soft;
    throw ArgumentError("unknown support '" + s + "' (hard|soft)");
}

Formulation parse_formulation(const std::string& s) {
    if (s == "ans") return Formulation::ANS;
    if (s == "standard") return Formulation::Standard;
    throw ArgumentError("unknown formulation '" + s + "' (standard|ans)");
}

QuadratureScheme parse_quadrature(const std::string& s) {
    if (s == "full") return QuadratureScheme::Full;
    if (s == "reduced") return QuadratureScheme::Reduced;
    if (s == "selective") return QuadratureScheme::SelectiveReduced;
    throw ArgumentError("unknown quadrature '" + s + "' (full|reduced|selective)");
}

MaterialLaw parse_law(const std::string& s) {
    if (s == "plate2d") return MaterialLaw::Plate2D;
    if (s == "solid3d") return MaterialLaw::Solid3D;
    throw ArgumentError("unknown law '" + s + "' (plate2d|solid3d)");
}

ThicknessMode parse_thickness_mode(const std::string& s) {
    if (s == "linear") return ThicknessMode::Linear;
    if (s == "constant") return ThicknessMode::Constant;
    throw ArgumentError("unknown thickness mode '" + s + "' (linear|constant)");
}

ScalingCenterPolicy parse_sc_policy(const std::string& s) {
    if (s == "moving") return ScalingCenterPolicy::Moving;
    if (s == "fixed") return ScalingCenterPolicy::Fixed;
    throw ArgumentError("unknown scaling-center policy '" + s + "' (moving|fixed)");
}

namespace {

std::string formulation_key(Formulation f) { return f == Formulation::ANS ? "ans" : "standard"; }
std::string quadrature_key(QuadratureScheme q) {
    switch (q) {
        case QuadratureScheme::Full: return "full";
        case QuadratureScheme::Reduced: return "reduced";
        case QuadratureScheme::SelectiveReduced: return "selective";
    }
    return "?";
}
std::string law_key(MaterialLaw l) { return l == MaterialLaw::Plate2D ? "plate2d" : "solid3d"; }
std::string mode_key(ThicknessMode m) { return m == ThicknessMode::Linear ? "linear" : "constant"; }
std::string sc_key(ScalingCenterPolicy p) { return p == ScalingCenterPolicy::Moving ? "moving" : "fixed"; }

}  // namespace

Json CaseParams::to_json() const {
    Json j;
    j["case"] = id;
    if (!thicknesses.empty()) j["t"] = thicknesses;
    if (mesh) j["mesh"] = to_string(*mesh);
    if (!sizes.empty()) j["n"] = sizes;
    if (formulation) j["formulation"] = formulation_key(*formulation);
    if (quadrature) j["quadrature"] = quadrature_key(*quadrature);
    if (law) j["law"] = law_key(*law);
    if (thickness_mode) j["thickness_mode"] = mode_key(*thickness_mode);
    if (sc) j["sc"] = sc_key(*sc);
    if (support) j["support"] = to_string(*support);
    if (length) j["length"] = *length;
    if (nu) j["nu"] = *nu;
    j["seed"] = seed;
    j["lloyd"] = lloyd_iterations;
    j["threads"] = threads;
    j["write_fields"] = write_fields;
    return j;
}

void CaseParams::apply_json(const Json& doc) {
    try {
        if (doc.contains("case")) id = doc["case"].get<std::string>();
        if (doc.contains("t")) {
            if (doc["t"].is_array())
                thicknesses = doc["t"].get<std::vector<double>>();
            else
                thicknesses = {doc["t"].get<double>()};
        }
        if (doc.contains("mesh")) mesh = parse_mesh_kind(doc["mesh"].get<std::string>());
        if (doc.contains("n")) {
            if (doc["n"].is_array())
                sizes = doc["n"].get<std::vector<int>>();
            else
                sizes = {doc["n"].get<int>()};
        }
        if (doc.contains("formulation")) formulation = parse_formulation(doc["formulation"].get<std::string>());
        if (doc.contains("quadrature")) quadrature = parse_quadrature(doc["quadrature"].get<std::string>());
        if (doc.contains("law")) law = parse_law(doc["law"].get<std::string>());
        if (doc.contains("thickness_mode")) thickness_mode = parse_thickness_mode(doc["thickness_mode"].get<std::string>());
        if (doc.contains("sc")) sc = parse_sc_policy(doc["sc"].get<std::string>());
        if (doc.contains("support")) support = parse_support(doc["support"].get<std::string>());
        if (doc.contains("length")) length = doc["length"].get<double>();
        if (doc.contains("seed")) seed = doc["seed"].get<std::uint64_t>();
        if (doc.contains("lloyd")) lloyd_iterations = doc["lloyd"].get<int>();
        if (doc.contains("threads")) threads = doc["threads"].get<int>();
        if (doc.contains("material")) {
            const Json& m = doc["material"];
            if (m.contains("t")) thicknesses = {m["t"].get<double>()};
            if (m.contains("nu")) nu = m["nu"].get<double>();
            if (m.contains("law")) law = parse_law(m["law"].get<std::string>());
            if (m.contains("thickness_mode")) thickness_mode = parse_thickness_mode(m["thickness_mode"].get<std::string>());
        }
    } catch (const Json::exception& e) {
        throw ArgumentError(std::string("malformed benchmark config: ") + e.what());
    }
}

bool RunReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

const CheckResult& RunReport::check(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return c;
    throw ArgumentError("report of '" + case_id + "' has no check '" + name + "'");
}

Json RunReport::to_json() const {
    Json j;
    j["case"] = case_id;
    j["parameters"] = parameters;
    j["results"] = results;
    Json cs = Json::array();
    for (const auto& c : checks) cs.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["checks"] = cs;
    j["passed"] = passed();
    j["wall_seconds"] = wall_seconds;
    return j;
}

const std::vector<std::string>& case_ids() {
    static const std::vector<std::string> ids = {
        "zero-energy",           "cantilever-moment", "cantilever-udl", "clamped-square-udl",
        "distortion",            "poisson-locking",   "square-load-function", "simply-supported",
        "circular",              "l-bracket",         "energy-norm"};
    return ids;
}

PolyMesh cantilever_six_polygon_mesh() {
    PolyMesh m;
    m.nodes = {{0.0, 0.0},          {2.0, 0.0},         {2.0, 1.0},         {0.0, 1.0},
               {1.0 / 3.0, 1.0 / 6.0}, {1.5, 0.25},       {4.0 / 3.0, 2.0 / 3.0}, {2.0 / 3.0, 2.0 / 3.0},
               {0.75, 0.125},       {1.25, 7.0 / 24.0}, {1.0, 0.75}};
    // 1-based node lists: (1,9,5) (1,2,6,10,9) (2,3,7,6) (3,4,8,11,7) (4,1,5,8) (5,9,10,6,7,11,8)
    m.elements = {{0, 8, 4}, {0, 1, 5, 9, 8}, {1, 2, 6, 5}, {2, 3, 7, 10, 6}, {3, 0, 4, 7}, {4, 8, 9, 5, 6, 10, 7}};
    return m;
}

// Helpers -----------------------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;

const std::vector<Dof> kPlateDofs{Dof::W, Dof::BetaX, Dof::BetaY};

std::vector<Dof> clamp_dofs(const MaterialModel& mat) {
    if (mat.with_membrane()) return {Dof::Ux, Dof::Uy, Dof::W, Dof::BetaX, Dof::BetaY};
    return kPlateDofs;
}

std::string num(double v) { return Table::num(v); }

std::string fmt(double v, int prec = 6) {
    std::ostringstream s;
    s.precision(prec);
    s << v;
    return s.str();
}

const ReferenceData& ref() { return ReferenceData::instance(); }

template <class T>
std::vector<T> or_default(const std::vector<T>& given, std::vector<T> def) {
    return given.empty() ? def : given;
}

StiffnessOptions stiffness(const CaseParams& p, Formulation f = Formulation::ANS,
                           QuadratureScheme q = QuadratureScheme::Full) {
    StiffnessOptions o;
    o.formulation = p.formulation.value_or(f);
    o.scheme = p.quadrature.value_or(q);
    return o;
}

FieldResult solve_case(const PolyMesh& mesh, const MaterialModel& mat, const std::vector<LoadSpec>& loads,
                       const std::vector<BoundaryCondition>& bcs, const StiffnessOptions& so, int threads) {
    AssemblyOptions ao;
    ao.stiffness = so;
    ao.threads = threads;
    return solve(assemble_global(mesh, mat, loads, bcs, ao));
}

PolyMesh rectangle_mesh(MeshKind kind, Vec2 lo, Vec2 hi, int n, const CaseParams& p) {
    switch (kind) {
        case MeshKind::Quad: return generate_structured_mesh(lo, hi, n, n, CellShape::Quad);
        case MeshKind::Tri: return generate_structured_mesh(lo, hi, n, n, CellShape::Tri);
        case MeshKind::Poly:
            return generate_voronoi_mesh(DomainSpec::rectangle(lo, hi), n * n, DensityField{}, p.lloyd_iterations,
                                         p.seed);
    }
    throw ArgumentError("unknown mesh kind");
}

// Quarter model on [0,a]^2 with the loaded corner at (a,a): outer edges x=0 and
// y=0 supported, symmetry on x=a and y=a.
std::vector<BoundaryCondition> quarter_bcs(double a, const MaterialModel& mat, bool clamped, SupportKind support) {
    const bool mem = mat.with_membrane();
    std::vector<BoundaryCondition> bcs;
    const Selector bottom = Selector::line({0, 0}, {a, 0}), left = Selector::line({0, 0}, {0, a});
    if (clamped) {
        bcs.push_back({bottom, clamp_dofs(mat)});
        bcs.push_back({left, clamp_dofs(mat)});
    } else {
        std::vector<Dof> b{Dof::W}, l{Dof::W};
        if (support == SupportKind::Hard) {
            b.push_back(Dof::BetaX);
            l.push_back(Dof::BetaY);
        }
        if (mem) {
            for (auto* v : {&b, &l}) {
                v->push_back(Dof::Ux);
                v->push_back(Dof::Uy);
            }
        }
        bcs.push_back({bottom, b});
        bcs.push_back({left, l});
    }
    std::vector<Dof> right{Dof::BetaX}, top{Dof::BetaY};
    if (mem) {
        right.push_back(Dof::Ux);
        top.push_back(Dof::Uy);
    }
    bcs.push_back({Selector::line({a, 0}, {a, a}), right});
    bcs.push_back({Selector::line({0, a}, {a, a}), top});
    return bcs;
}

double mean_w_on_line(const FieldResult& sol, const PolyMesh& mesh, double x) {
    double s = 0.0;
    int c = 0;
    for (int n = 0; n < mesh.num_nodes(); ++n)
        if (std::abs(mesh.nodes[n].x() - x) < 1e-9) {
            s += sol.node_value(n, Dof::W);
            ++c;
        }
    if (c == 0) throw LocationError("no node on x = " + fmt(x));
    return s / c;
}

FieldSnapshot snapshot(const std::string& name, const PolyMesh& mesh, const FieldResult& sol,
                       const MaterialModel& mat, const StiffnessOptions& so) {
    return {name, mesh, sol, recover_element_resultants(sol, mesh, mat, so)};
}

std::string status_of(const std::exception& e) {
    if (dynamic_cast<const SingularConfigurationError*>(&e)) return "singular-configuration";
    if (dynamic_cast<const DegenerateSectionError*>(&e)) return "degenerate-section";
    if (dynamic_cast<const SolverError*>(&e)) return "solver-error";
    return "error";
}

// Pointwise ordering: first series error <= every other series error at common keys.
CheckResult ordering_check(const std::string& name, const std::map<int, double>& best,
                           const std::map<int, double>& other, const std::string& other_label) {
    CheckResult c{name, true, ""};
    std::ostringstream d;
    for (const auto& [k, e] : best) {
        auto it = other.find(k);
        if (it == other.end()) continue;
        if (e > it->second) {
            c.pass = false;
            d << "n=" << k << ": " << fmt(e, 3) << " > " << other_label << " " << fmt(it->second, 3) << "; ";
        }
    }
    c.detail = c.pass ? "ANS error <= " + other_label + " error at every common point" : d.str();
    return c;
}

// zero-energy -------------------------------------------------------------------

RunReport case_zero_energy(const CaseParams& p) {
    RunReport r;
    const Json& cfg = ref().at("zero_energy");
    MaterialModel mat;
    mat.E = cfg["material"]["E"];
    mat.nu = p.nu.value_or(cfg["material"]["nu"].get<double>());
    mat.t = p.thicknesses.empty() ? cfg["material"]["t"].get<double>() : p.thicknesses.front();
    const double tol = cfg["zero_tol_rel"];
    const double vtol = cfg["value_tol_rel"];
    const StiffnessOptions so = stiffness(p);
    Table t{{"sides", "index", "eigenvalue", "reference"}, {}};
    for (int n : or_default(p.sizes, {3, 4, 5, 6, 7, 8})) {
        const EigenReport er = zero_energy_mode_test(regular_polygon_mesh(n, 1.0), mat, so, tol);
        const Json& tab = cfg["nonzero_spectra"].contains(std::to_string(n)) ? cfg["nonzero_spectra"][std::to_string(n)]
                                                                               : Json();
        std::vector<double> nonzero(er.eigenvalues.begin() + std::min<std::size_t>(3, er.eigenvalues.size()),
                                    er.eigenvalues.end());
        for (std::size_t i = 0; i < er.eigenvalues.size(); ++i) {
            std::string pv = i < 3 ? "0" : "";
            if (i >= 3 && tab.is_array() && i - 3 < tab.size()) pv = num(tab[i - 3].get<double>());
            t.add_row({std::to_string(n), std::to_string(i + 1), num(er.eigenvalues[i]), pv});
        }
        r.results["zero_count"][std::to_string(n)] = er.zero_count;
        r.results["eigenvalues"][std::to_string(n)] = er.eigenvalues;
        r.checks.push_back({"zero_count_" + std::to_string(n), er.zero_count == 3,
                            std::to_string(n) + "-gon: " + std::to_string(er.zero_count) + " zero eigenvalues"});
        if (tab.is_array() && so.formulation == Formulation::ANS && mat.nu == cfg["material"]["nu"].get<double>() && mat.t == cfg["material"]["t"].get<double>()) {
            const auto pv = tab.get<std::vector<double>>();
            bool ok = pv.size() == nonzero.size();
            double worst = 0.0;
            for (std::size_t i = 0; ok && i < pv.size(); ++i) worst = std::max(worst, std::abs(nonzero[i] / pv[i] - 1.0));
            ok = ok && worst <= vtol;
            r.checks.push_back({"spectrum_" + std::to_string(n), ok, "worst relative deviation " + fmt(worst, 3)});
        }
    }
    r.tables.push_back({"eigenvalues", std::move(t)});
    return r;
}

// cantilever-moment -------------------------------------------------------------

RunReport case_cantilever_moment(const CaseParams& p) {
    RunReport r;
    const Json& cfg = ref().at("cantilever_moment");
    const double L = cfg["L"], E = cfg["E"], m = cfg["m"];
    const auto ref_t = cfg["thicknesses"].get<std::vector<double>>();
    const auto thick = or_default(p.thicknesses, ref_t);
    struct Variant {
        std::string name;
        bool six;
        int n;
        Formulation f;
    };
    std::vector<Variant> variants;
    const bool want_poly = p.mesh && *p.mesh == MeshKind::Poly;
    const bool want_quad = !p.mesh || *p.mesh == MeshKind::Quad;
    const int nq = p.sizes.empty() ? 1 : p.sizes.front();
    if (want_quad) {
        if (!p.formulation || *p.formulation == Formulation::Standard)
            variants.push_back({"quad-standard", false, nq, Formulation::Standard});
        if (!p.formulation || *p.formulation == Formulation::ANS)
            variants.push_back({"quad-ans", false, nq, Formulation::ANS});
    }
    if (want_poly || (!p.mesh && (!p.formulation || *p.formulation == Formulation::ANS)))
        variants.push_back({"six-ans", true, 6, p.formulation.value_or(Formulation::ANS)});

    Table t{{"variant", "t", "elements", "w_tip", "w_ref", "rel_error_percent"}, {}};
    for (const auto& v : variants) {
        const PolyMesh mesh = v.six ? cantilever_six_polygon_mesh() : generate_structured_mesh({0, 0}, {L, 1.0}, v.n, 1, CellShape::Quad);
        for (double th : thick) {
            MaterialModel mat;
            mat.E = E;
            mat.nu = p.nu.value_or(cfg["nu"].get<double>());
            mat.t = th;
            mat.law = p.law.value_or(MaterialLaw::Plate2D);
            mat.mode = p.thickness_mode.value_or(ThicknessMode::Linear);
            StiffnessOptions so = stiffness(p, v.f);
            so.formulation = v.f;
            const FieldResult sol = solve_case(mesh, mat, {MomentLineLoad{Selector::line({L, 0}, {L, 1}), m, Dof::BetaX}},
                                               {{Selector::line({0, 0}, {0, 1}), clamp_dofs(mat)}}, so, p.threads);
            const double w = mean_w_on_line(sol, mesh, L);
            const double wr = cantilever_moment_reference(m, L, E, th);
            const double err = (w - wr) / wr;
            t.add_row({v.name, num(th), std::to_string(mesh.num_elements()), num(w), num(wr), num(100.0 * err)});
            r.results[v.name][fmt(th)] = err;
            const auto it = std::find(ref_t.begin(), ref_t.end(), th);
            if (it == ref_t.end() || v.n != (v.six ? 6 : 1)) continue;
            const std::size_t k = static_cast<std::size_t>(it - ref_t.begin());
            if (v.name == "quad-standard") {
                const double expected = cfg["standard_error_percent"][k];
                const double tol = cfg["standard_tol_points"];
                r.checks.push_back({"standard_t=" + fmt(th), std::abs(100.0 * err - expected) <= tol,
                                    fmt(100.0 * err, 5) + "% vs " + fmt(expected) + "%"});
            } else if (v.name == "quad-ans") {
                r.checks.push_back({"ans_t=" + fmt(th), std::abs(err) <= cfg["ans_tol_rel"].get<double>(),
                                    "relative error " + fmt(err, 3)});
            } else if (v.f == Formulation::ANS) {
                r.checks.push_back({"six_ans_t=" + fmt(th), std::abs(err) <= cfg["ans_six_tol_rel"].get<double>(),
                                    "relative error " + fmt(err, 3)});
            }
            if (v.six && th == 0.01) r.fields.push_back(snapshot("six_ans_t0.01", mesh, sol, mat, so));
        }
    }
    r.tables.push_back({"tip_errors", std::move(t)});
    return r;
}

// cantilever-udl ----------------------------------------------------------------

struct SweepPoint {
    int n;
    int dofs;
    double value;
    double ratio;
};

std::vector<SweepPoint> cantilever_udl_sweep(const CaseParams& p, double th, const StiffnessOptions& so,
                                             const std::vector<int>& sizes) {
    const Json& cfg = ref().at("cantilever_udl");
    const double L = cfg["L"], E = cfg["E"], q = cfg["q"];
    MaterialModel mat;
    mat.E = E;
    mat.nu = p.nu.value_or(cfg["nu"].get<double>());
    mat.t = th;
    mat.law = p.law.value_or(MaterialLaw::Plate2D);
    mat.mode = p.thickness_mode.value_or(ThicknessMode::Linear);
    const double wr = cantilever_udl_reference(q, L, E, mat.nu, th, mat.k);
    std::vector<SweepPoint> out;
    for (int n : sizes) {
        const PolyMesh mesh = generate_structured_mesh({0, 0}, {L, 1.0}, n, 1, CellShape::Quad);
        const FieldResult sol = solve_case(mesh, mat, {UniformPressure{q}}, {{Selector::line({0, 0}, {0, 1}), clamp_dofs(mat)}},
                                           so, p.threads);
        const double w = mean_w_on_line(sol, mesh, L);
        out.push_back({n, static_cast<int>(sol.d.size()), w, w / wr});
    }
    return out;
}

std::string variant_label(const StiffnessOptions& so) {
    if (so.formulation == Formulation::ANS) return so.scheme == QuadratureScheme::Full ? "ANS" : "ANS-" + quadrature_key(so.scheme);
    switch (so.scheme) {
        case QuadratureScheme::Full: return "Standard";
        case QuadratureScheme::Reduced: return "R";
        case QuadratureScheme::SelectiveReduced: return "SR";
    }
    return "?";
}

RunReport case_cantilever_udl(const CaseParams& p,
                              const std::vector<std::pair<Formulation, QuadratureScheme>>& variants) {
    RunReport r;
    const Json& cfg = ref().at("cantilever_udl");
    const auto sizes = or_default(p.sizes, {1, 2, 4, 8, 16, 32});
    const auto thick = or_default(p.thicknesses, cfg["thicknesses"].get<std::vector<double>>());
    const double t_cmp = p.thicknesses.size() == 1 ? p.thicknesses.front() : cfg["comparison_thickness"].get<double>();
    const double tol = cfg["converged_tol"];
    Table t{{"series", "t", "elements", "dofs", "w_tip", "ratio"}, {}};
    NamedChart conv{"convergence", {"Cantilever under uniform load", "DOFs", "w / w_ref", true, false}, {}};
    StiffnessOptions main;
    main.formulation = variants.front().first;
    main.scheme = variants.front().second;
    for (double th : thick) {
        const auto pts = cantilever_udl_sweep(p, th, main, sizes);
        ChartSeries s{"t=" + fmt(th), {}, {}};
        for (const auto& pt : pts) {
            t.add_row({variant_label(main), num(th), std::to_string(pt.n), std::to_string(pt.dofs), num(pt.value), num(pt.ratio)});
            s.x.push_back(pt.dofs);
            s.y.push_back(pt.ratio);
        }
        conv.series.push_back(std::move(s));
        const double fin = pts.back().ratio;
        r.results["finest_ratio"][fmt(th)] = fin;
        r.checks.push_back({"converged_t=" + fmt(th), std::abs(fin - 1.0) <= tol,
                            "w/w_ref = " + fmt(fin, 8) + " at " + std::to_string(pts.back().n) + " elements"});
    }
    NamedChart cmp{"comparison", {"Cantilever t=" + fmt(t_cmp) + ": error vs DOFs", "DOFs", "|1 - w/w_ref|", true, true}, {}};
    std::map<int, double> first;
    for (std::size_t k = 0; k < variants.size(); ++k) {
        StiffnessOptions so;
        so.formulation = variants[k].first;
        so.scheme = variants[k].second;
        const auto pts = cantilever_udl_sweep(p, t_cmp, so, sizes);
        std::map<int, double> err;
        ChartSeries s{variant_label(so), {}, {}};
        for (const auto& pt : pts) {
            err[pt.n] = std::abs(1.0 - pt.ratio);
            s.x.push_back(pt.dofs);
            s.y.push_back(std::abs(1.0 - pt.ratio));
            if (k > 0 || std::find(thick.begin(), thick.end(), t_cmp) == thick.end())
                t.add_row({variant_label(so), num(t_cmp), std::to_string(pt.n), std::to_string(pt.dofs), num(pt.value),
                           num(pt.ratio)});
        }
        cmp.series.push_back(std::move(s));
        if (k == 0)
            first = err;
        else
            r.checks.push_back(ordering_check("ordering_vs_" + variant_label(so), first, err, variant_label(so)));
    }
    r.tables.push_back({"tip_deflection", std::move(t)});
    r.charts.push_back(std::move(conv));
    r.charts.push_back(std::move(cmp));
    return r;
}

// clamped-square-udl ------------------------------------------------------------

RunReport case_clamped_square(const CaseParams& p,
                              const std::vector<std::pair<Formulation, QuadratureScheme>>& variants) {
    RunReport r;
    const Json& cfg = ref().at("clamped_square");
    const double L = p.length.value_or(cfg["L"].get<double>()), a = 0.5 * L;
    const double wr_tab = cfg["w_ref"], tol = cfg["tol_rel"];
    const auto sizes = or_default(p.sizes, {2, 4, 8, 16});
    std::vector<MeshKind> kinds = p.mesh ? std::vector<MeshKind>{*p.mesh}
                                         : std::vector<MeshKind>{MeshKind::Quad, MeshKind::Poly, MeshKind::Tri};
    MaterialModel mat;
    mat.E = cfg["E"];
    mat.nu = p.nu.value_or(cfg["nu"].get<double>());
    mat.t = p.thicknesses.empty() ? cfg["t"].get<double>() : p.thicknesses.front();
    mat.law = p.law.value_or(MaterialLaw::Plate2D);
    mat.mode = p.thickness_mode.value_or(ThicknessMode::Linear);
    const double q = cfg["q"];
    const bool tabulated_setup = mat.t == cfg["t"].get<double>() && mat.nu == cfg["nu"].get<double>() && L == cfg["L"].get<double>();
    const double wr = tabulated_setup ? wr_tab : clamped_square_udl_reference(q, L, mat.plate().D);
    Table t{{"series", "n", "elements", "dofs", "w_center", "ratio"}, {}};
    NamedChart chart{"mesh_types", {"Clamped square, uniform load", "DOFs", "w / w_ref", true, false}, {}};
    std::map<std::string, std::map<int, double>> errors;
    for (const auto& var : variants) {
        StiffnessOptions so;
        so.formulation = var.first;
        so.scheme = var.second;
        for (MeshKind kind : kinds) {
            const std::string label = variants.size() > 1 ? variant_label(so) + "-" + to_string(kind) : to_string(kind);
            ChartSeries s{label, {}, {}};
            for (int n : sizes) {
                const PolyMesh mesh = rectangle_mesh(kind, {0, 0}, {a, a}, n, p);
                const FieldResult sol = solve_case(mesh, mat, {UniformPressure{q}}, quarter_bcs(a, mat, true, SupportKind::Hard), so, p.threads);
                const double w = probe_field(sol, mesh, {a, a}, 1e-9 * a)(0);
                t.add_row({label, std::to_string(n), std::to_string(mesh.num_elements()), std::to_string(sol.d.size()), num(w),
                           num(w / wr)});
                s.x.push_back(static_cast<double>(sol.d.size()));
                s.y.push_back(w / wr);
                errors[label][n] = std::abs(1.0 - w / wr);
                r.results[label][std::to_string(n)] = w / wr;
                if (kind == MeshKind::Quad && n == 16 && so.formulation == Formulation::ANS && so.scheme == QuadratureScheme::Full) {
                    r.checks.push_back({"center_16x16_quad", std::abs(w / wr - 1.0) <= tol,
                                        "w = " + fmt(w, 8) + ", w/w_ref = " + fmt(w / wr, 8)});
                    r.fields.push_back(snapshot("quad_16x16", mesh, sol, mat, so));
                }
            }
            chart.series.push_back(std::move(s));
        }
    }
    if (variants.size() == 1 && kinds.size() == 3) {
        const int fin = sizes.back();
        const double eq = errors["quad"][fin], ep = errors["poly"][fin], et = errors["tri"][fin];
        r.checks.push_back({"mesh_ordering", eq <= ep && ep <= et,
                            "n=" + std::to_string(fin) + ": |err| quad " + fmt(eq, 3) + ", poly " + fmt(ep, 3) + ", tri " +
                                fmt(et, 3)});
    }
    if (variants.size() > 1) {
        const std::string k0 = to_string(kinds.front());
        StiffnessOptions s0;
        s0.formulation = variants[0].first;
        s0.scheme = variants[0].second;
        for (std::size_t k = 1; k < variants.size(); ++k) {
            StiffnessOptions sk;
            sk.formulation = variants[k].first;
            sk.scheme = variants[k].second;
            r.checks.push_back(ordering_check("ordering_vs_" + variant_label(sk), errors[variant_label(s0) + "-" + k0],
                                              errors[variant_label(sk) + "-" + k0], variant_label(sk)));
        }
    }
    r.tables.push_back({"center_deflection", std::move(t)});
    r.charts.push_back(std::move(chart));
    return r;
}

// distortion --------------------------------------------------------------------

RunReport case_distortion(const CaseParams& p) {
    RunReport r;
    const Json& cfg = ref().at("distortion");
    const double L = cfg["L"], a = 0.5 * L, P = cfg["P"], wr = cfg["w_ref"], band = cfg["band_rel"];
    MaterialModel mat;
    mat.E = cfg["E"];
    mat.nu = p.nu.value_or(cfg["nu"].get<double>());
    mat.t = p.thicknesses.empty() ? cfg["t"].get<double>() : p.thicknesses.front();
    mat.law = p.law.value_or(MaterialLaw::Plate2D);
    mat.mode = p.thickness_mode.value_or(ThicknessMode::Linear);
    const StiffnessOptions so = stiffness(p);
    const auto cx = cfg["fixed_centers_x"].get<std::vector<double>>();
    const auto cy = cfg["fixed_centers_y"].get<std::vector<double>>();
    std::vector<ScalingCenterPolicy> policies =
        p.sc ? std::vector<ScalingCenterPolicy>{*p.sc}
             : std::vector<ScalingCenterPolicy>{ScalingCenterPolicy::Fixed, ScalingCenterPolicy::Moving};
    Table t{{"sc", "s", "status", "w_C"}, {}};
    NamedChart chart{"w_vs_s", {"Distortion test", "s", "w(C)", false, false}, {}};
    std::map<std::string, std::map<double, std::pair<std::string, double>>> rows;
    for (auto pol : policies) {
        ChartSeries s{sc_key(pol) + " SC", {}, {}};
        for (int k = -28; k <= 28; ++k) {
            const double sv = 0.5 * k;
            PolyMesh mesh = generate_structured_mesh({0, 0}, {a, a}, 2, 2, CellShape::Quad);
            std::vector<Vec2> centers;
            for (std::size_t i = 0; i < cx.size(); ++i) centers.push_back({cx[i], cy[i]});
            if (pol == ScalingCenterPolicy::Fixed) mesh.scaling_centers = centers;
            std::string status = "ok";
            double w = std::nan("");
            try {
                const PolyMesh dm = distort_center_node(mesh, sv, pol);
                const FieldResult sol = solve_case(dm, mat, {PointLoad{{a, a}, 0.25 * P}}, quarter_bcs(a, mat, true, SupportKind::Hard),
                                                   so, p.threads);
                w = probe_field(sol, dm, {a, a}, 1e-9 * a)(0);
                s.x.push_back(sv);
                s.y.push_back(w);
                if (sv == 0.0 && pol == ScalingCenterPolicy::Moving) r.fields.push_back(snapshot("undistorted", dm, sol, mat, so));
            } catch (const Error& e) {
                status = status_of(e);
            }
            rows[sc_key(pol)][sv] = {status, w};
            t.add_row({sc_key(pol), num(sv), status, std::isnan(w) ? "" : num(w)});
            r.results[sc_key(pol)][fmt(sv)] = {{"status", status}, {"w", std::isnan(w) ? Json() : Json(w)}};
        }
        chart.series.push_back(std::move(s));
    }
    if (rows.count("fixed")) {
        const auto& f = rows["fixed"];
        const bool sing = f.at(12.5).first == "singular-configuration" && f.at(-12.5).first == "singular-configuration";
        r.checks.push_back({"fixed_singular_at_12.5", sing,
                            "s=12.5: " + f.at(12.5).first + ", s=-12.5: " + f.at(-12.5).first});
    }
    if (rows.count("moving")) {
        const auto& m = rows["moving"];
        bool ok = true;
        for (double sv : {-13.0, -12.5, 12.5, 13.0}) ok = ok && m.at(sv).first == "ok";
        r.checks.push_back({"moving_solves_at_12.5_13", ok, ok ? "solved at |s| = 12.5 and 13" : "moving-SC run failed"});
    }
    if (rows.count("fixed") && rows.count("moving")) {
        const double wf = rows["fixed"][0.0].second, wm = rows["moving"][0.0].second;
        r.checks.push_back({"s0_identical", std::abs(wf - wm) <= 1e-10 * std::abs(wm),
                            "fixed " + fmt(wf, 12) + ", moving " + fmt(wm, 12)});
    }
    for (auto& [pol, m] : rows) {
        const double w0 = m[0.0].second;
        r.checks.push_back({"s0_band_" + pol, std::abs(w0 / wr - 1.0) <= band,
                            "w(C) = " + fmt(w0, 6) + " vs w_ref " + fmt(wr) + " (band " + fmt(100 * band) + "%)"});
    }
    r.tables.push_back({"w_vs_s", std::move(t)});
    r.charts.push_back(std::move(chart));
    return r;
}

// poisson-locking ---------------------------------------------------------------

RunReport case_poisson_locking(const CaseParams& p) {
    RunReport r;
    const Json& cfg = ref().at("poisson_locking");
    const double L = cfg["L"], a = 0.5 * L, P = cfg["P"], tol = cfg["tol_abs"];
    const auto sizes = or_default(p.sizes, {2, 4, 8, 16, 32, 64});
    const std::vector<double> nus = p.nu ? std::vector<double>{*p.nu} : std::vector<double>{0.3, 0.0};
    const std::vector<ThicknessMode> modes = p.thickness_mode ? std::vector<ThicknessMode>{*p.thickness_mode}
                                                              : std::vector<ThicknessMode>{ThicknessMode::Linear, ThicknessMode::Constant};
    const StiffnessOptions so = stiffness(p);
    Table t{{"nu", "mode", "n", "dofs", "w_C", "ratio"}, {}};
    NamedChart chart{"convergence", {"Poisson thickness locking", "DOFs", "w / w_ref", true, false}, {}};
    std::map<std::string, std::vector<double>> series;
    for (double nu : nus) {
        MaterialModel mat;
        mat.law = p.law.value_or(MaterialLaw::Solid3D);
        mat.E = cfg["E"];
        mat.nu = nu;
        mat.t = p.thicknesses.empty() ? cfg["t"].get<double>() : p.thicknesses.front();
        double wr;
        if (nu == 0.3)
            wr = cfg["w_ref_nu03"];
        else if (nu == 0.0)
            wr = cfg["w_ref_nu0"];
        else
            wr = clamped_square_point_reference(P, L, mat.plate().D);
        for (ThicknessMode mode : modes) {
            mat.mode = mode;
            const std::string key = "nu=" + fmt(nu) + "/" + mode_key(mode);
            ChartSeries s{key, {}, {}};
            for (int n : sizes) {
                const PolyMesh mesh = rectangle_mesh(p.mesh.value_or(MeshKind::Quad), {0, 0}, {a, a}, n, p);
                const FieldResult sol = solve_case(mesh, mat, {PointLoad{{a, a}, 0.25 * P}}, quarter_bcs(a, mat, true, SupportKind::Hard),
                                                   so, p.threads);
                const double w = probe_field(sol, mesh, {a, a}, 1e-9 * a)(0);
                t.add_row({num(nu), mode_key(mode), std::to_string(n), std::to_string(sol.d.size()), num(w), num(w / wr)});
                s.x.push_back(static_cast<double>(sol.d.size()));
                s.y.push_back(w / wr);
                series[key].push_back(w / wr);
            }
            r.results[key] = series[key];
            chart.series.push_back(std::move(s));
        }
    }
    auto has = [&](const std::string& k) { return series.count(k) > 0; };
    if (has("nu=0.3/constant")) {
        const double v = series["nu=0.3/constant"].back();
        const double target = cfg["constant_mode_ratio"];
        r.checks.push_back({"constant_nu=0.3", std::abs(v - target) <= tol, "converged ratio " + fmt(v, 6) + " vs " + fmt(target)});
    }
    if (has("nu=0.3/linear")) {
        const double v = series["nu=0.3/linear"].back();
        r.checks.push_back({"linear_nu=0.3", std::abs(v - 1.0) <= tol, "converged ratio " + fmt(v, 6)});
    }
    if (has("nu=0/linear") && has("nu=0/constant")) {
        double worst = 0.0;
        const auto& l = series["nu=0/linear"];
        const auto& c = series["nu=0/constant"];
        for (std::size_t i = 0; i < l.size(); ++i) worst = std::max(worst, std::abs(l[i] - c[i]) / std::abs(l[i]));
        r.checks.push_back({"nu=0_modes_identical", worst <= 1e-9, "max relative difference " + fmt(worst, 3)});
    }
    r.tables.push_back({"center_deflection", std::move(t)});
    r.charts.push_back(std::move(chart));
    return r;
}

// square-load-function / energy-norm ---------------------------------------------

struct SquareNorms {
    int n;
    int dofs;
    NormReport norms;
};

std::vector<SquareNorms> square_load_sweep(const CaseParams& p, double th, const std::vector<int>& sizes,
                                           std::optional<FieldSnapshot>* keep = nullptr) {
    const Json& cfg = ref().at("square_load_function");
    MaterialModel mat;
    mat.E = cfg["E"];
    mat.nu = p.nu.value_or(cfg["nu"].get<double>());
    mat.t = th;
    const StiffnessOptions so = stiffness(p);
    const double E = mat.E, nu = mat.nu;
    const ExactSolution exact = square_load_function_solution(nu, th);
    std::vector<BoundaryCondition> bcs;
    for (auto [a, b] : {std::pair<Vec2, Vec2>{{0, 0}, {1, 0}}, {{1, 0}, {1, 1}}, {{1, 1}, {0, 1}}, {{0, 1}, {0, 0}}})
        bcs.push_back({Selector::line(a, b), kPlateDofs});
    std::vector<SquareNorms> out;
    for (int n : sizes) {
        const PolyMesh mesh = rectangle_mesh(p.mesh.value_or(MeshKind::Quad), {0, 0}, {1, 1}, n, p);
        const FieldResult sol = solve_case(
            mesh, mat, {FunctionLoad{[=](double x, double y) { return square_load_function(x, y, E, nu, th); }}}, bcs, so,
            p.threads);
        NormOptions no;
        no.stiffness = so;
        no.threads = p.threads;
        out.push_back({n, static_cast<int>(sol.d.size()), error_norms(sol, exact, mesh, mat, no)});
        if (keep && n == sizes.back()) *keep = snapshot("t" + fmt(th) + "_n" + std::to_string(n), mesh, sol, mat, so);
    }
    return out;
}

std::vector<int> range(int a, int b) {
    std::vector<int> v;
    for (int i = a; i <= b; ++i) v.push_back(i);
    return v;
}

RunReport case_square_load(const CaseParams& p) {
    RunReport r;
    const Json& cfg = ref().at("square_load_function");
    const auto thick = or_default(p.thicknesses, cfg["thicknesses"].get<std::vector<double>>());
    const auto sizes = or_default(p.sizes, range(2, 20));
    const auto l2r = cfg["l2_slope_range"].get<std::vector<double>>();
    const auto h1r = cfg["h1_slope_range"].get<std::vector<double>>();
    Table t{{"t", "n", "h", "dofs", "l2_rel", "h1s_rel", "energy_rel"}, {}};
    Table rates{{"t", "norm", "slope", "intercept", "r2", "slope_finer_half"}, {}};
    NamedChart chart{"errors", {"Clamped square, load f(x,y)", "h", "relative error", true, true}, {}};
    for (double th : thick) {
        std::optional<FieldSnapshot> keep;
        const auto pts = square_load_sweep(p, th, sizes, th == thick.front() ? &keep : nullptr);
        if (keep) r.fields.push_back(std::move(*keep));
        std::vector<std::pair<double, double>> l2, h1;
        ChartSeries sl{"L2 t=" + fmt(th), {}, {}}, sh{"H1s t=" + fmt(th), {}, {}};
        for (const auto& pt : pts) {
            t.add_row({num(th), std::to_string(pt.n), num(pt.norms.h), std::to_string(pt.dofs), num(pt.norms.l2_rel),
                       num(pt.norms.h1s_rel), num(pt.norms.energy_rel)});
            l2.push_back({pt.norms.h, pt.norms.l2_rel});
            h1.push_back({pt.norms.h, pt.norms.h1s_rel});
            sl.x.push_back(pt.norms.h);
            sl.y.push_back(pt.norms.l2_rel);
            sh.x.push_back(pt.norms.h);
            sh.y.push_back(pt.norms.h1s_rel);
        }
        chart.series.push_back(std::move(sl));
        chart.series.push_back(std::move(sh));
        if (pts.size() < 3) continue;
        for (auto [name, data, rg] : {std::tuple{"l2", &l2, &l2r}, std::tuple{"h1s", &h1, &h1r}}) {
            const RateFit fit = fit_convergence_rate(*data);
            std::vector<std::pair<double, double>> half(data->begin() + static_cast<long>(data->size() / 2), data->end());
            const double fine = half.size() >= 3 ? fit_convergence_rate(half).slope : std::nan("");
            rates.add_row({num(th), name, num(fit.slope), num(fit.intercept), num(fit.r2), num(fine)});
            r.results["slopes"][fmt(th)][name] = {{"full", fit.slope}, {"finer_half", std::isnan(fine) ? Json() : Json(fine)}};
            r.checks.push_back({std::string(name) + "_slope_t=" + fmt(th), fit.slope >= (*rg)[0] && fit.slope <= (*rg)[1],
                                "slope " + fmt(fit.slope, 4) + " over n=" + std::to_string(sizes.front()) + ".." +
                                    std::to_string(sizes.back()) + " (finer half " + fmt(fine, 4) + ")"});
        }
    }
    r.tables.push_back({"norms", std::move(t)});
    r.tables.push_back({"rates", std::move(rates)});
    r.charts.push_back(std::move(chart));
    return r;
}

RunReport case_energy_norm(const CaseParams& p) {
    RunReport r;
    const Json& cfg = ref().at("square_load_function");
    const double th = p.thicknesses.empty() ? cfg["energy_norm_t"].get<double>() : p.thicknesses.front();
    const auto tab_n = cfg["energy_norm_meshes"].get<std::vector<int>>();
    const auto tab_v = cfg["energy_norm_values"].get<std::vector<double>>();
    const double tol = cfg["energy_norm_tol_abs"];
    const auto sizes = or_default(p.sizes, tab_n);
    const auto pts = square_load_sweep(p, th, sizes);
    Table t{{"n", "e_s", "reference", "abs_diff"}, {}};
    NamedChart chart{"energy_norm", {"Energy norm, t=" + fmt(th), "elements per side", "e_s", false, false}, {}};
    ChartSeries sc{"computed", {}, {}}, sp{"reference", {}, {}};
    bool ok = true;
    std::ostringstream d;
    for (const auto& pt : pts) {
        const auto it = std::find(tab_n.begin(), tab_n.end(), pt.n);
        std::string pv, diff;
        if (it != tab_n.end() && th == cfg["energy_norm_t"].get<double>()) {
            const double v = tab_v[static_cast<std::size_t>(it - tab_n.begin())];
            pv = num(v);
            diff = num(std::abs(pt.norms.energy_rel - v));
            ok = ok && std::abs(pt.norms.energy_rel - v) <= tol;
            sp.x.push_back(pt.n);
            sp.y.push_back(v);
        }
        d << "n=" << pt.n << ": " << fmt(pt.norms.energy_rel, 4) << (pv.empty() ? "" : " (" + fmt(std::stod(pv), 4) + ")") << "; ";
        t.add_row({std::to_string(pt.n), num(pt.norms.energy_rel), pv, diff});
        sc.x.push_back(pt.n);
        sc.y.push_back(pt.norms.energy_rel);
        r.results["e_s"][std::to_string(pt.n)] = pt.norms.energy_rel;
    }
    r.checks.push_back({"energy_norm_table", ok, d.str()});
    chart.series = {sc, sp};
    r.tables.push_back({"energy_norm", std::move(t)});
    r.charts.push_back(std::move(chart));
    return r;
}

// simply-supported --------------------------------------------------------------

RunReport case_simply_supported(const CaseParams& p,
                                const std::vector<std::pair<Formulation, QuadratureScheme>>& variants) {
    RunReport r;
    const Json& cfg = ref().at("simply_supported");
    const auto ref_t = cfg["thicknesses"].get<std::vector<double>>();
    const auto ref_c = cfg["coefficients"].get<std::vector<double>>();
    const auto thick = or_default(p.thicknesses, ref_t);
    const auto sizes = or_default(p.sizes, {4, 8, 16, 32});
    const double L = p.length.value_or(10.0), a = 0.5 * L, q = cfg["q"], tol = cfg["tol_rel"];
    const SupportKind support = p.support.value_or(SupportKind::Hard);
    const MeshKind kind = p.mesh.value_or(MeshKind::Quad);
    Table t{{"series", "t", "n", "dofs", "w_center", "coefficient", "reference"}, {}};
    NamedChart chart{"coefficient", {"Simply supported plate", "DOFs", "100 D w_c / (q L^4)", true, false}, {}};
    std::map<std::string, std::map<int, double>> errs;
    for (const auto& var : variants) {
        StiffnessOptions so;
        so.formulation = var.first;
        so.scheme = var.second;
        for (double th : thick) {
            MaterialModel mat;
            mat.E = cfg["E"];
            mat.nu = p.nu.value_or(cfg["nu"].get<double>());
            mat.t = th;
            mat.law = p.law.value_or(MaterialLaw::Plate2D);
            mat.mode = p.thickness_mode.value_or(ThicknessMode::Linear);
            const double D = mat.plate().D;
            const auto it = std::find(ref_t.begin(), ref_t.end(), th);
            const double rc = it == ref_t.end() ? std::nan("") : ref_c[static_cast<std::size_t>(it - ref_t.begin())];
            const std::string label = variant_label(so) + " t=" + fmt(th);
            ChartSeries s{label, {}, {}};
            double last = 0.0;
            for (int n : sizes) {
                const PolyMesh mesh = rectangle_mesh(kind, {0, 0}, {a, a}, n, p);
                const FieldResult sol = solve_case(mesh, mat, {UniformPressure{q}}, quarter_bcs(a, mat, false, support), so, p.threads);
                const double w = probe_field(sol, mesh, {a, a}, 1e-9 * a)(0);
                last = 100.0 * D * w / (q * L * L * L * L);
                t.add_row({variant_label(so), num(th), std::to_string(n), std::to_string(sol.d.size()), num(w), num(last),
                           std::isnan(rc) ? "" : num(rc)});
                s.x.push_back(static_cast<double>(sol.d.size()));
                s.y.push_back(last);
                if (!std::isnan(rc)) errs[variant_label(so) + std::to_string(th)][n] = std::abs(last / rc - 1.0);
            }
            chart.series.push_back(std::move(s));
            r.results[label] = last;
            if (!std::isnan(rc) && var == variants.front())
                r.checks.push_back({"coefficient_t=" + fmt(th), std::abs(last / rc - 1.0) <= tol,
                                    fmt(last, 6) + " vs " + fmt(rc) + " (" + to_string(support) + " support, L=" + fmt(L) + ", " +
                                        to_string(kind) + " n=" + std::to_string(sizes.back()) + ")"});
        }
    }
    r.tables.push_back({"center_deflection", std::move(t)});
    r.charts.push_back(std::move(chart));
    return r;
}

// circular ----------------------------------------------------------------------

RunReport case_circular(const CaseParams& p) {
    RunReport r;
    const Json& cfg = ref().at("circular");
    const auto thick = or_default(p.thicknesses, cfg["thicknesses"].get<std::vector<double>>());
    const auto sizes = or_default(p.sizes, {16, 32, 64, 128, 256, 512, 1024});
    const auto l2r = cfg["l2_slope_range"].get<std::vector<double>>();
    const auto h1r = cfg["h1_slope_range"].get<std::vector<double>>();
    const double R = cfg["R"], q = cfg["q"];
    const StiffnessOptions so = stiffness(p);
    const DomainSpec disk = DomainSpec::circle({0, 0}, R);
    std::vector<PolyMesh> meshes;
    for (int n : sizes) meshes.push_back(generate_voronoi_mesh(disk, n, DensityField{}, p.lloyd_iterations, p.seed));
    Table t{{"t", "elements", "h", "dofs", "w_center", "l2_rel", "h1s_rel", "energy_rel"}, {}};
    Table rates{{"t", "norm", "slope", "intercept", "r2"}, {}};
    NamedChart chart{"errors", {"Clamped circular plate", "h", "relative error", true, true}, {}};
    for (double th : thick) {
        MaterialModel mat;
        mat.E = cfg["E"];
        mat.nu = p.nu.value_or(cfg["nu"].get<double>());
        mat.t = th;
        const ExactSolution exact = clamped_circular_solution(q, mat.E, mat.nu, th, mat.k);
        std::vector<std::pair<double, double>> l2, h1;
        ChartSeries sl{"L2 t=" + fmt(th), {}, {}}, sh{"H1s t=" + fmt(th), {}, {}};
        for (const PolyMesh& mesh : meshes) {
            const FieldResult sol = solve_case(mesh, mat, {UniformPressure{q}},
                                               {{Selector::circle({0, 0}, R, 1e-7 * R), kPlateDofs}}, so, p.threads);
            NormOptions no;
            no.stiffness = so;
            no.threads = p.threads;
            const NormReport nr = error_norms(sol, exact, mesh, mat, no);
            const double w0 = probe_field(sol, mesh, {0, 0}, 1e-9)(0);
            t.add_row({num(th), std::to_string(mesh.num_elements()), num(nr.h), std::to_string(sol.d.size()), num(w0),
                       num(nr.l2_rel), num(nr.h1s_rel), num(nr.energy_rel)});
            l2.push_back({nr.h, nr.l2_rel});
            h1.push_back({nr.h, nr.h1s_rel});
            sl.x.push_back(nr.h);
            sl.y.push_back(nr.l2_rel);
            sh.x.push_back(nr.h);
            sh.y.push_back(nr.h1s_rel);
            if (th == thick.front() && &mesh == &meshes.back()) r.fields.push_back(snapshot("finest", mesh, sol, mat, so));
        }
        chart.series.push_back(std::move(sl));
        chart.series.push_back(std::move(sh));
        if (l2.size() < 3) continue;
        for (auto [name, data, rg] : {std::tuple{"l2", &l2, &l2r}, std::tuple{"h1s", &h1, &h1r}}) {
            const RateFit fit = fit_convergence_rate(*data);
            rates.add_row({num(th), name, num(fit.slope), num(fit.intercept), num(fit.r2)});
            r.results["slopes"][fmt(th)][name] = fit.slope;
            r.checks.push_back({std::string(name) + "_slope_t=" + fmt(th), fit.slope >= (*rg)[0] && fit.slope <= (*rg)[1],
                                "slope " + fmt(fit.slope, 4)});
        }
    }
    r.tables.push_back({"norms", std::move(t)});
    r.tables.push_back({"rates", std::move(rates)});
    r.charts.push_back(std::move(chart));
    return r;
}

// l-bracket ---------------------------------------------------------------------

RunReport case_l_bracket(const CaseParams& p) {
    RunReport r;
    const Json& cfg = ref().at("l_bracket");
    MaterialModel mat;
    mat.E = cfg["E"];
    mat.nu = p.nu.value_or(cfg["nu"].get<double>());
    mat.t = p.thicknesses.empty() ? cfg["t"].get<double>() : p.thicknesses.front();
    mat.law = p.law.value_or(MaterialLaw::Plate2D);
    mat.mode = p.thickness_mode.value_or(ThicknessMode::Linear);
    const double wr = cfg["w_ref"], load = cfg["line_load"];
    const auto wp = cfg["w_probe"].get<std::vector<double>>();
    const auto mp = cfg["mxx_probe"].get<std::vector<double>>();
    const auto band = cfg["mxx_band"].get<std::vector<double>>();
    const DomainSpec dom = DomainSpec::l_bracket_with_holes();
    DensityField graded;
    graded.background = 0.2;
    for (const auto& h : dom.holes()) graded.attractors.push_back({h.center, 0.5});
    const std::vector<BoundaryCondition> bcs = {{Selector::circle({0.5, 0.5}, 0.25, 1e-7), clamp_dofs(mat)},
                                                {Selector::circle({0.5, 5.5}, 0.25, 1e-7), clamp_dofs(mat)}};
    const std::vector<LoadSpec> loads = {LineLoad{Selector::line({4, 5}, {4, 6}, 1e-7), load, Dof::W}};

    Table t{{"series", "elements", "dofs", "w_probe", "ratio", "m_xx_probe", "m_xx_ratio_ref"}, {}};
    NamedChart cw{"displacement", {"L-bracket w(4,6)", "DOFs", "w / w_ref", true, false}, {}};
    NamedChart cm{"stress", {"L-bracket m_xx(0.75,5.5)", "elements", "m_xx / m_xx_ref", false, false}, {}};
    std::map<std::string, std::map<int, std::pair<double, double>>> res;
    auto run = [&](const std::string& series, int n, const DensityField& dens, Formulation f, bool keep) {
        const PolyMesh mesh = generate_voronoi_mesh(dom, n, dens, p.lloyd_iterations, p.seed);
        StiffnessOptions so = stiffness(p);
        so.formulation = f;
        const FieldResult sol = solve_case(mesh, mat, loads, bcs, so, p.threads);
        const double w = probe_field(sol, mesh, {wp[0], wp[1]}, 1e-9)(0);
        const double mxx = probe_resultants(sol, mesh, mat, so, {mp[0], mp[1]}, 0.05).m(0);
        t.add_row({series, std::to_string(n), std::to_string(sol.d.size()), num(w), num(w / wr), num(mxx),
                   num(mxx / cfg["mxx_ref"].get<double>())});
        res[series][n] = {w / wr, mxx};
        r.results[series][std::to_string(n)] = {{"w_ratio", w / wr}, {"m_xx", mxx}, {"dofs", sol.d.size()}};
        if (keep) r.fields.push_back(snapshot(series + "_" + std::to_string(n), mesh, sol, mat, so));
        return std::pair{static_cast<double>(sol.d.size()), w / wr};
    };
    const Formulation fmain = p.formulation.value_or(Formulation::ANS);
    const auto sizes = or_default(p.sizes, {300, 500, 1000, 2000, 3000});
    ChartSeries su{"uniform " + variant_label(stiffness(p, fmain)), {}, {}}, sr{"refined", {}, {}};
    ChartSeries mu{"uniform", {}, {}}, mr{"refined", {}, {}};
    for (int n : sizes) {
        const auto [d, ratio] = run("uniform", n, DensityField{}, fmain, n == sizes.back());
        su.x.push_back(d);
        su.y.push_back(ratio);
        mu.x.push_back(n);
        mu.y.push_back(res["uniform"][n].second / cfg["mxx_ref"].get<double>());
    }
    for (int n : {300, 500, 1000}) {
        const auto [d, ratio] = run("refined", n, graded, fmain, false);
        sr.x.push_back(d);
        sr.y.push_back(ratio);
        mr.x.push_back(n);
        mr.y.push_back(res["refined"][n].second / cfg["mxx_ref"].get<double>());
    }
    if (!p.formulation) run("standard", 2000, DensityField{}, Formulation::Standard, false);
    cw.series = {su, sr};
    cm.series = {mu, mr};
    if (fmain == Formulation::ANS && res["uniform"].count(500)) {
        const double v = res["uniform"][500].first;
        r.checks.push_back({"ans_uniform_500", v >= cfg["ans_ratio_min"].get<double>(), "w/w_ref = " + fmt(v, 6)});
    }
    if (res.count("standard")) {
        const double v = res["standard"][2000].first;
        r.checks.push_back({"standard_uniform_2000", v <= cfg["standard_ratio_max"].get<double>(), "w/w_ref = " + fmt(v, 6)});
    }
    if (res["uniform"].count(300)) {
        const double eu = std::abs(1.0 - res["uniform"][300].first), er = std::abs(1.0 - res["refined"][300].first);
        r.checks.push_back({"refined_300_not_worse", er <= eu, "|1-w/w_ref| refined " + fmt(er, 4) + ", uniform " + fmt(eu, 4)});
    }
    if (fmain == Formulation::ANS && res["uniform"].count(3000)) {
        const double m = res["uniform"][3000].second;
        r.checks.push_back({"mxx_uniform_3000", m >= band[0] && m <= band[1],
                            "m_xx = " + fmt(m, 7) + " (reference " + fmt(cfg["mxx_tabulated"].get<double>(), 7) + ")"});
    }
    r.tables.push_back({"probes", std::move(t)});
    r.charts.push_back(std::move(cw));
    r.charts.push_back(std::move(cm));
    return r;
}

using Variants = std::vector<std::pair<Formulation, QuadratureScheme>>;

RunReport dispatch(const CaseParams& p, const std::optional<Variants>& variants) {
    const std::string& id = p.id;
    auto single = [&]() {
        return Variants{{p.formulation.value_or(Formulation::ANS), p.quadrature.value_or(QuadratureScheme::Full)}};
    };
    if (variants) {
        if (id == "cantilever-udl") return case_cantilever_udl(p, *variants);
        if (id == "clamped-square-udl") return case_clamped_square(p, *variants);
        if (id == "simply-supported") return case_simply_supported(p, *variants);
        throw ArgumentError("case '" + id + "' does not support formulation sweeps");
    }
    if (id == "zero-energy") return case_zero_energy(p);
    if (id == "cantilever-moment") return case_cantilever_moment(p);
    if (id == "cantilever-udl") {
        if (p.formulation || p.quadrature) return case_cantilever_udl(p, single());
        return case_cantilever_udl(p, {{Formulation::ANS, QuadratureScheme::Full},
                                       {Formulation::Standard, QuadratureScheme::Reduced},
                                       {Formulation::Standard, QuadratureScheme::SelectiveReduced}});
    }
    if (id == "clamped-square-udl") return case_clamped_square(p, single());
    if (id == "distortion") return case_distortion(p);
    if (id == "poisson-locking") return case_poisson_locking(p);
    if (id == "square-load-function") return case_square_load(p);
    if (id == "simply-supported") return case_simply_supported(p, single());
    if (id == "circular") return case_circular(p);
    if (id == "l-bracket") return case_l_bracket(p);
    if (id == "energy-norm") return case_energy_norm(p);
    throw ArgumentError("unknown case '" + id + "'");
}

RunReport timed(const CaseParams& p, const std::optional<Variants>& variants,
                const std::optional<std::filesystem::path>& out_dir) {
    const auto t0 = Clock::now();
    RunReport r = dispatch(p, variants);
    r.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    r.case_id = p.id;
    r.parameters = p.to_json();
    if (out_dir) write_report(r, *out_dir);
    return r;
}

}  // namespace

RunReport run_benchmark(const CaseParams& params, const std::optional<std::filesystem::path>& out_dir) {
    return timed(params, std::nullopt, out_dir);
}

RunReport compare_formulations(const CaseParams& params,
                               const std::vector<std::pair<Formulation, QuadratureScheme>>& variants,
                               const std::optional<std::filesystem::path>& out_dir) {
    if (variants.empty()) throw ArgumentError("at least one formulation is required");
    if (variants.size() == 1) {
        CaseParams p = params;
        p.formulation = variants.front().first;
        p.quadrature = variants.front().second;
        return run_benchmark(p, out_dir);
    }
    return timed(params, variants, out_dir);
}

void write_report(const RunReport& report, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    for (const auto& t : report.tables) write_csv(out_dir / (t.name + ".csv"), t.table);
    for (const auto& c : report.charts) write_svg_line_chart(out_dir / (c.name + ".svg"), c.spec, c.series);
    if (report.parameters.value("write_fields", true))
        for (const auto& f : report.fields) write_vtk(out_dir / (f.name + ".vtk"), f.mesh, f.solution, f.cell_resultants);
    Json j = report.to_json();
    j.erase("wall_seconds");
    write_json(out_dir / "report.json", j);
    Table summary{{"check", "pass", "detail"}, {}};
    for (const auto& c : report.checks) summary.add_row({c.name, c.pass ? "true" : "false", c.detail});
    write_csv(out_dir / "checks.csv", summary);
}

}  // namespace plateforge
