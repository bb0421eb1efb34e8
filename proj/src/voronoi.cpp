#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "plateforge/errors.hpp"
#include "plateforge/mesh.hpp"

namespace plateforge {

namespace {

// Convex polygon with one generator label per edge (edge k runs from v[k] to v[k+1]).
// Label -1 marks the initial bounding box.
struct LabeledPolygon {
    std::vector<Vec2> v;
    std::vector<int> label;
};

void clip(LabeledPolygon& poly, const Vec2& p, const Vec2& g, int g_label) {
    const Vec2 d = g - p;
    const Vec2 m = 0.5 * (p + g);
    const double scale = d.squaredNorm();
    auto side = [&](const Vec2& x) { return (x - m).dot(d); };
    const std::size_t n = poly.v.size();
    std::vector<double> s(n);
    bool any_out = false;
    for (std::size_t k = 0; k < n; ++k) {
        s[k] = side(poly.v[k]);
        if (s[k] > 1e-14 * scale) any_out = true;
    }
    if (!any_out) return;
    LabeledPolygon out;
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t k1 = (k + 1) % n;
        const bool a_in = s[k] <= 1e-14 * scale;
        const bool b_in = s[k1] <= 1e-14 * scale;
        if (a_in) {
            out.v.push_back(poly.v[k]);
            out.label.push_back(poly.label[k]);
        }
        if (a_in != b_in) {
            const double t = s[k] / (s[k] - s[k1]);
            const Vec2 x = poly.v[k] + t * (poly.v[k1] - poly.v[k]);
            out.v.push_back(x);
            out.label.push_back(a_in ? g_label : poly.label[k]);
        }
    }
    poly = std::move(out);
}

// Uniform bucket grid over generator positions for nearest-first ring search.
class GeneratorGrid {
public:
    GeneratorGrid(const std::vector<Vec2>& pts, Vec2 lo, Vec2 hi) : pts_(pts), lo_(lo) {
        const Vec2 ext = hi - lo;
        cs_ = std::sqrt(std::max(ext.x() * ext.y(), 1e-300) / std::max<std::size_t>(pts.size(), 1));
        cs_ = std::max(cs_, 1e-12 * ext.norm());
        nx_ = std::max(1, static_cast<int>(std::ceil(ext.x() / cs_)) + 1);
        ny_ = std::max(1, static_cast<int>(std::ceil(ext.y() / cs_)) + 1);
        buckets_.assign(static_cast<std::size_t>(nx_ * ny_), {});
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const auto [ix, iy] = cell_of(pts[i]);
            buckets_[static_cast<std::size_t>(iy * nx_ + ix)].push_back(static_cast<int>(i));
        }
    }

    std::pair<int, int> cell_of(const Vec2& p) const {
        const int ix = std::clamp(static_cast<int>((p.x() - lo_.x()) / cs_), 0, nx_ - 1);
        const int iy = std::clamp(static_cast<int>((p.y() - lo_.y()) / cs_), 0, ny_ - 1);
        return {ix, iy};
    }

    double cell_size() const { return cs_; }
    int max_ring() const { return std::max(nx_, ny_); }

    template <class F>
    void for_ring(const Vec2& p, int r, F&& f) const {
        const auto [cx, cy] = cell_of(p);
        for (int iy = cy - r; iy <= cy + r; ++iy) {
            if (iy < 0 || iy >= ny_) continue;
            for (int ix = cx - r; ix <= cx + r; ++ix) {
                if (ix < 0 || ix >= nx_) continue;
                if (std::max(std::abs(ix - cx), std::abs(iy - cy)) != r) continue;
                for (int g : buckets_[static_cast<std::size_t>(iy * nx_ + ix)]) f(g);
            }
        }
    }

private:
    const std::vector<Vec2>& pts_;
    Vec2 lo_;
    double cs_ = 1.0;
    int nx_ = 1, ny_ = 1;
    std::vector<std::vector<int>> buckets_;
};

struct Diagram {
    std::vector<LabeledPolygon> cells;  // one per seed
    int n_seeds = 0;                    // labels >= n_seeds are reflections
};

std::vector<Vec2> reflect_seeds(const DomainSpec& domain, const std::vector<Vec2>& seeds, double alpha) {
    std::vector<Vec2> refl;
    for (const auto& p : seeds) {
        const double dp = std::abs(domain.signed_distance(p));
        for (const auto& piece : domain.boundary_pieces()) {
            const Vec2 c = closest_point(piece, p);
            const double d = (c - p).norm();
            if (d >= alpha || d == 0.0) continue;
            const Vec2 r = 2.0 * c - p;
            const double dr = domain.signed_distance(r);
            if (dr > 0.0 && dr >= 0.9 * dp) refl.push_back(r);
        }
    }
    return refl;
}

Diagram build_diagram(const DomainSpec& domain, const std::vector<Vec2>& seeds, double alpha) {
    std::vector<Vec2> gens = seeds;
    const auto refl = reflect_seeds(domain, seeds, alpha);
    gens.insert(gens.end(), refl.begin(), refl.end());

    auto [lo, hi] = domain.bounding_box();
    const double pad = 0.25 * domain.diameter();
    lo -= Vec2(pad, pad);
    hi += Vec2(pad, pad);
    Vec2 glo = lo, ghi = hi;
    for (const auto& g : gens) {
        glo = glo.cwiseMin(g);
        ghi = ghi.cwiseMax(g);
    }
    GeneratorGrid grid(gens, glo, ghi);

    Diagram dg;
    dg.n_seeds = static_cast<int>(seeds.size());
    dg.cells.resize(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        const Vec2& p = seeds[i];
        LabeledPolygon poly{{lo, Vec2(hi.x(), lo.y()), hi, Vec2(lo.x(), hi.y())}, {-1, -1, -1, -1}};
        for (int r = 0; r <= grid.max_ring(); ++r) {
            grid.for_ring(p, r, [&](int g) {
                if (g == static_cast<int>(i)) return;
                if ((gens[static_cast<std::size_t>(g)] - p).squaredNorm() == 0.0) return;
                clip(poly, p, gens[static_cast<std::size_t>(g)], g);
            });
            double rmax = 0.0;
            for (const auto& v : poly.v) rmax = std::max(rmax, (v - p).norm());
            if (r * grid.cell_size() >= 2.0 * rmax) break;
        }
        dg.cells[i] = std::move(poly);
    }
    return dg;
}

// Density-weighted centroid and area of a convex polygon (fan triangulation, 3-point rule).
std::pair<Vec2, double> weighted_centroid(const std::vector<Vec2>& v, const DensityField& rho) {
    const Vec2 o = polygon_centroid(v);
    Vec2 num = Vec2::Zero();
    double mass = 0.0;
    const std::size_t n = v.size();
    for (std::size_t k = 0; k < n; ++k) {
        const Vec2& a = v[k];
        const Vec2& b = v[(k + 1) % n];
        const double area = 0.5 * cross2(a - o, b - o);
        const Vec2 q[3] = {(o + a) / 2.0, (a + b) / 2.0, (b + o) / 2.0};
        for (const auto& x : q) {
            const double w = rho(x) * area / 3.0;
            num += w * x;
            mass += w;
        }
    }
    return {mass > 0.0 ? Vec2(num / mass) : o, polygon_signed_area(v)};
}

std::vector<Vec2> domain_corners(const DomainSpec& domain) {
    std::vector<BoundarySegment> segs;
    for (const auto& piece : domain.boundary_pieces())
        if (const auto* s = std::get_if<BoundarySegment>(&piece)) segs.push_back(*s);
    std::vector<Vec2> corners;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        for (std::size_t j = 0; j < segs.size(); ++j) {
            if (i == j || (segs[i].b - segs[j].a).norm() > 1e-12 * domain.diameter()) continue;
            const Vec2 u = (segs[i].b - segs[i].a).normalized();
            const Vec2 w = (segs[j].b - segs[j].a).normalized();
            if (std::abs(cross2(u, w)) > 1e-6) corners.push_back(segs[i].b);
        }
    }
    return corners;
}

struct BuildOutcome {
    PolyMesh mesh;
    std::string failure;
};

BuildOutcome assemble_mesh(const DomainSpec& domain, const Diagram& dg, const VoronoiOptions& opt) {
    const double diam = domain.diameter();
    const double h = std::sqrt(domain.area() / std::max(dg.n_seeds, 1));
    const double merge_tol = 1e-7 * h;

    // Merge coincident vertices through a hashed grid keyed at merge_tol resolution.
    std::vector<Vec2> nodes;
    std::vector<char> on_boundary;
    std::unordered_map<long long, std::vector<int>> hash;
    auto key = [&](long long ix, long long iy) { return ix * 73856093LL ^ iy * 19349663LL; };
    auto find_or_add = [&](const Vec2& p, bool bnd) {
        const long long ix = static_cast<long long>(std::floor(p.x() / (4.0 * merge_tol)));
        const long long iy = static_cast<long long>(std::floor(p.y() / (4.0 * merge_tol)));
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy) {
                auto it = hash.find(key(ix + dx, iy + dy));
                if (it == hash.end()) continue;
                for (int id : it->second)
                    if ((nodes[static_cast<std::size_t>(id)] - p).norm() <= merge_tol) {
                        if (bnd) on_boundary[static_cast<std::size_t>(id)] = 1;
                        return id;
                    }
            }
        const int id = static_cast<int>(nodes.size());
        nodes.push_back(p);
        on_boundary.push_back(bnd ? 1 : 0);
        hash[key(ix, iy)].push_back(id);
        return id;
    };

    std::vector<std::vector<int>> elements;
    for (const auto& cell : dg.cells) {
        std::vector<int> loop;
        const std::size_t n = cell.v.size();
        for (std::size_t k = 0; k < n; ++k) {
            const bool bnd = cell.label[k] < 0 || cell.label[k] >= dg.n_seeds ||
                             cell.label[(k + n - 1) % n] < 0 || cell.label[(k + n - 1) % n] >= dg.n_seeds;
            const int id = find_or_add(cell.v[k], bnd);
            if (loop.empty() || loop.back() != id) loop.push_back(id);
        }
        while (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
        elements.push_back(std::move(loop));
    }

    // Corner vertices are pinned to the exact domain corners.
    std::vector<char> pinned(nodes.size(), 0);
    for (const auto& c : domain_corners(domain)) {
        int best = -1;
        double best_d = 0.5 * h;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            if (!on_boundary[i]) continue;
            const double d = (nodes[i] - c).norm();
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(i);
            }
        }
        if (best >= 0) {
            nodes[static_cast<std::size_t>(best)] = c;
            pinned[static_cast<std::size_t>(best)] = 1;
        }
    }

    // Collapse short edges, one pass, shortest first.
    {
        std::vector<double> cell_area(elements.size());
        for (std::size_t e = 0; e < elements.size(); ++e) {
            std::vector<Vec2> pts;
            for (int id : elements[e]) pts.push_back(nodes[static_cast<std::size_t>(id)]);
            cell_area[e] = std::abs(polygon_signed_area(pts));
        }
        struct Edge {
            int a, b;
            double ratio;
        };
        std::map<std::pair<int, int>, std::vector<int>> edge_elems;
        for (std::size_t e = 0; e < elements.size(); ++e) {
            const auto& loop = elements[e];
            for (std::size_t k = 0; k < loop.size(); ++k) {
                const auto mm = std::minmax(loop[k], loop[(k + 1) % loop.size()]);
                edge_elems[{mm.first, mm.second}].push_back(static_cast<int>(e));
            }
        }
        std::vector<Edge> edges;
        for (const auto& [ab, els] : edge_elems) {
            double a_ref = 0.0;
            for (int e : els) a_ref += cell_area[static_cast<std::size_t>(e)];
            a_ref /= static_cast<double>(els.size());
            const double len = (nodes[static_cast<std::size_t>(ab.first)] - nodes[static_cast<std::size_t>(ab.second)]).norm();
            edges.push_back({ab.first, ab.second, len / std::sqrt(a_ref)});
        }
        std::sort(edges.begin(), edges.end(), [](const Edge& x, const Edge& y) { return x.ratio < y.ratio; });
        std::vector<int> remap(nodes.size());
        std::iota(remap.begin(), remap.end(), 0);
        std::vector<char> touched(nodes.size(), 0);
        std::vector<int> sizes;
        for (const auto& loop : elements) sizes.push_back(static_cast<int>(loop.size()));
        for (const auto& ed : edges) {
            if (ed.ratio >= opt.collapse_fraction) break;
            const auto ua = static_cast<std::size_t>(ed.a), ub = static_cast<std::size_t>(ed.b);
            if (touched[ua] || touched[ub]) continue;
            if (pinned[ua] && pinned[ub]) continue;
            const auto& els = edge_elems[{std::min(ed.a, ed.b), std::max(ed.a, ed.b)}];
            bool ok = true;
            for (int e : els)
                if (sizes[static_cast<std::size_t>(e)] <= 3) ok = false;
            if (!ok) continue;
            for (int e : els) --sizes[static_cast<std::size_t>(e)];
            Vec2 pos;
            if (pinned[ua]) pos = nodes[ua];
            else if (pinned[ub]) pos = nodes[ub];
            else if (on_boundary[ua] && !on_boundary[ub]) pos = nodes[ua];
            else if (on_boundary[ub] && !on_boundary[ua]) pos = nodes[ub];
            else pos = 0.5 * (nodes[ua] + nodes[ub]);
            nodes[ua] = pos;
            on_boundary[ua] = static_cast<char>(on_boundary[ua] || on_boundary[ub]);
            pinned[ua] = static_cast<char>(pinned[ua] || pinned[ub]);
            remap[ub] = ed.a;
            touched[ua] = touched[ub] = 1;
        }
        for (auto& loop : elements) {
            std::vector<int> nl;
            for (int id : loop) {
                const int r = remap[static_cast<std::size_t>(id)];
                if (nl.empty() || nl.back() != r) nl.push_back(r);
            }
            while (nl.size() > 1 && nl.front() == nl.back()) nl.pop_back();
            loop = std::move(nl);
        }
    }

    // Project boundary and stray vertices onto the domain boundary.
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (pinned[i]) continue;
        if (on_boundary[i] || domain.signed_distance(nodes[i]) > 0.0) nodes[i] = domain.project_to_boundary(nodes[i]);
    }

    // Compact node numbering.
    PolyMesh mesh;
    std::vector<int> new_id(nodes.size(), -1);
    for (auto& loop : elements)
        for (int& id : loop) {
            auto& nid = new_id[static_cast<std::size_t>(id)];
            if (nid < 0) {
                nid = static_cast<int>(mesh.nodes.size());
                mesh.nodes.push_back(nodes[static_cast<std::size_t>(id)]);
            }
            id = nid;
        }
    mesh.elements = std::move(elements);

    BuildOutcome out;
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
        const double sd = domain.signed_distance(mesh.nodes[i]);
        if (sd > 1e-9 * diam) {
            std::ostringstream msg;
            msg << "vertex " << i << " lies outside the domain (signed distance " << sd << ")";
            out.failure = msg.str();
            return out;
        }
    }
    std::vector<Vec2> centers;
    for (int e = 0; e < mesh.num_elements(); ++e) centers.push_back(element_centroid(mesh, e));
    mesh.scaling_centers = centers;
    const MeshReport rep = validate_mesh(mesh);
    if (!rep.ok()) {
        out.failure = rep.issues.front().message;
        return out;
    }
    out.mesh = std::move(mesh);
    return out;
}

std::vector<Vec2> sample_seeds(const DomainSpec& domain, int n, const DensityField& density, std::mt19937_64& rng) {
    const auto [lo, hi] = domain.bounding_box();
    std::uniform_real_distribution<double> ux(lo.x(), hi.x()), uy(lo.y(), hi.y()), u01(0.0, 1.0);
    const double rho_max = density.upper_bound();
    std::vector<Vec2> seeds;
    seeds.reserve(static_cast<std::size_t>(n));
    const long long max_draws = 10000LL * n + 100000;
    long long draws = 0;
    while (static_cast<int>(seeds.size()) < n) {
        if (++draws > max_draws) throw GenerationError("seed sampling did not produce enough interior points");
        const Vec2 p(ux(rng), uy(rng));
        if (domain.signed_distance(p) >= 0.0) continue;
        if (u01(rng) * rho_max > density(p)) continue;
        seeds.push_back(p);
    }
    return seeds;
}

}  // namespace

VoronoiResult generate_voronoi(const DomainSpec& domain, int n_elements, const DensityField& density,
                               int max_lloyd_iters, std::uint64_t seed, const VoronoiOptions& options) {
    if (n_elements < 1) throw ArgumentError("n_elements must be at least 1");
    if (max_lloyd_iters < 0) throw ArgumentError("max_lloyd_iters must be non-negative");
    domain.validate();
    density.validate();
    if (!(domain.area() > 0.0)) throw ArgumentError("domain is empty");

    std::mt19937_64 rng(seed);
    const double area = domain.area();
    const double alpha = 1.5 * std::sqrt(area / n_elements);
    std::vector<std::string> diagnostics;
    for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
        VoronoiResult res;
        res.retries = attempt;
        std::vector<Vec2> seeds = sample_seeds(domain, n_elements, density, rng);
        Diagram dg = build_diagram(domain, seeds, alpha);
        for (int it = 0; it < max_lloyd_iters; ++it) {
            double sum = 0.0;
            for (std::size_t i = 0; i < seeds.size(); ++i) {
                const auto [c, a] = weighted_centroid(dg.cells[i].v, density);
                Vec2 next = c;
                if (domain.signed_distance(next) >= 0.0) next = seeds[i];
                sum += a * a * (next - seeds[i]).squaredNorm();
                seeds[i] = next;
            }
            const double err = std::sqrt(sum) * n_elements / std::pow(area, 1.5);
            res.lloyd_displacements.push_back(err);
            res.iterations = it + 1;
            dg = build_diagram(domain, seeds, alpha);
            if (err < options.lloyd_tolerance) break;
        }
        BuildOutcome built = assemble_mesh(domain, dg, options);
        if (built.failure.empty()) {
            res.mesh = std::move(built.mesh);
            return res;
        }
        diagnostics.push_back("attempt " + std::to_string(attempt) + ": " + built.failure);
    }
    std::ostringstream msg;
    msg << "Voronoi mesh generation failed after " << options.max_retries + 1 << " attempts";
    for (const auto& d : diagnostics) msg << "; " << d;
    throw GenerationError(msg.str());
}

PolyMesh generate_voronoi_mesh(const DomainSpec& domain, int n_elements, const DensityField& density,
                               int max_lloyd_iters, std::uint64_t seed) {
    return generate_voronoi(domain, n_elements, density, max_lloyd_iters, seed).mesh;
}

}  // namespace plateforge
