#include "plateforge/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "plateforge/errors.hpp"

namespace plateforge {

double polygon_signed_area(const std::vector<Vec2>& loop) {
    double a = 0.0;
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) a += cross2(loop[i], loop[(i + 1) % n]);
    return 0.5 * a;
}

Vec2 polygon_centroid(const std::vector<Vec2>& loop) {
    // Shoelace centroid about the first vertex to limit cancellation.
    const std::size_t n = loop.size();
    const Vec2 o = loop.front();
    double a = 0.0;
    Vec2 c = Vec2::Zero();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 p = loop[i] - o, q = loop[(i + 1) % n] - o;
        const double w = cross2(p, q);
        a += w;
        c += w * (p + q);
    }
    if (a == 0.0) {
        Vec2 m = Vec2::Zero();
        for (const auto& p : loop) m += p;
        return m / static_cast<double>(n);
    }
    return o + c / (3.0 * a);
}

Vec2 PolyMesh::scaling_center(int element) const {
    if (scaling_centers) return (*scaling_centers)[static_cast<std::size_t>(element)];
    return element_centroid(*this, element);
}

std::vector<Vec2> element_coordinates(const PolyMesh& mesh, int element) {
    const auto& loop = mesh.elements[static_cast<std::size_t>(element)];
    std::vector<Vec2> pts;
    pts.reserve(loop.size());
    for (int n : loop) pts.push_back(mesh.nodes[static_cast<std::size_t>(n)]);
    return pts;
}

double element_area(const PolyMesh& mesh, int element) { return polygon_signed_area(element_coordinates(mesh, element)); }

Vec2 element_centroid(const PolyMesh& mesh, int element) { return polygon_centroid(element_coordinates(mesh, element)); }

std::vector<Section> decompose_into_sections(const PolyMesh& mesh, int element) {
    if (element < 0 || element >= mesh.num_elements()) throw ArgumentError("element index out of range");
    const auto& loop = mesh.elements[static_cast<std::size_t>(element)];
    if (loop.size() < 3) throw DegenerateSectionError(element, -1, "element has fewer than 3 nodes");
    const double area = element_area(mesh, element);
    const Vec2 x0 = mesh.scaling_center(element);
    std::vector<Section> sections;
    sections.reserve(loop.size());
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const int a = loop[i], b = loop[(i + 1) % loop.size()];
        Section s{x0, mesh.nodes[static_cast<std::size_t>(a)], mesh.nodes[static_cast<std::size_t>(b)], {a, b, element}};
        const double sa = s.signed_area();
        if (!(sa > 1e-12 * std::abs(area))) {
            std::ostringstream msg;
            msg << "degenerate section in element " << element << ", edge " << i << " (area " << sa << ")";
            throw DegenerateSectionError(element, static_cast<int>(i), msg.str());
        }
        sections.push_back(s);
    }
    return sections;
}

PolyMesh generate_structured_mesh(Vec2 lo, Vec2 hi, int nx, int ny, CellShape shape) {
    if (nx < 1 || ny < 1) throw ArgumentError("structured mesh needs nx, ny >= 1");
    PolyMesh m;
    m.nodes.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
    for (int j = 0; j <= ny; ++j)
        for (int i = 0; i <= nx; ++i)
            m.nodes.emplace_back(lo.x() + (hi.x() - lo.x()) * i / nx, lo.y() + (hi.y() - lo.y()) * j / ny);
    auto id = [nx](int i, int j) { return j * (nx + 1) + i; };
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            const int n00 = id(i, j), n10 = id(i + 1, j), n11 = id(i + 1, j + 1), n01 = id(i, j + 1);
            if (shape == CellShape::Quad) {
                m.elements.push_back({n00, n10, n11, n01});
            } else {
                m.elements.push_back({n00, n10, n11});
                m.elements.push_back({n00, n11, n01});
            }
        }
    }
    return m;
}

PolyMesh generate_structured_mesh(const DomainSpec& rect, int nx, int ny, CellShape shape) {
    if (rect.kind() != DomainSpec::Kind::Rectangle) throw ArgumentError("structured meshes need a rectangular domain");
    return generate_structured_mesh(rect.rect_lo(), rect.rect_hi(), nx, ny, shape);
}

PolyMesh regular_polygon_mesh(int n_sides, double circumradius) {
    if (n_sides < 3) throw ArgumentError("a polygon needs at least 3 sides");
    PolyMesh m;
    std::vector<int> loop;
    for (int i = 0; i < n_sides; ++i) {
        const double a = 2.0 * std::numbers::pi * i / n_sides;
        m.nodes.emplace_back(circumradius * std::cos(a), circumradius * std::sin(a));
        loop.push_back(i);
    }
    m.elements.push_back(loop);
    return m;
}

PolyMesh distort_center_node(const PolyMesh& mesh, double s, ScalingCenterPolicy policy) {
    std::vector<int> valence(mesh.nodes.size(), 0);
    for (const auto& loop : mesh.elements)
        for (int n : loop) ++valence[static_cast<std::size_t>(n)];
    int center = -1;
    for (std::size_t i = 0; i < valence.size(); ++i) {
        if (valence[i] == 4) {
            if (center >= 0) throw ArgumentError("mesh has more than one node shared by four elements");
            center = static_cast<int>(i);
        }
    }
    if (center < 0) throw ArgumentError("mesh has no node shared by four elements");

    PolyMesh out = mesh;
    if (policy == ScalingCenterPolicy::Fixed && !out.scaling_centers) {
        std::vector<Vec2> sc;
        for (int e = 0; e < mesh.num_elements(); ++e) sc.push_back(element_centroid(mesh, e));
        out.scaling_centers = sc;
    }
    if (policy == ScalingCenterPolicy::Moving) out.scaling_centers.reset();

    Vec2& p = out.nodes[static_cast<std::size_t>(center)];
    p += Vec2(s, -s);

    if (policy == ScalingCenterPolicy::Fixed) {
        double diam = 0.0;
        for (const auto& q : out.nodes) diam = std::max(diam, (q - out.nodes.front()).norm());
        for (std::size_t e = 0; e < out.scaling_centers->size(); ++e) {
            if (((*out.scaling_centers)[e] - p).norm() <= 1e-9 * diam) {
                std::ostringstream msg;
                msg << "displaced node coincides with the scaling center of element " << e;
                throw SingularConfigurationError(msg.str());
            }
        }
    }
    return out;
}

std::string MeshReport::summary() const {
    std::string out;
    for (const auto& i : issues) out += (out.empty() ? "" : "; ") + i.message;
    return out;
}

bool MeshReport::has(MeshIssue::Kind kind) const {
    return std::any_of(issues.begin(), issues.end(), [kind](const MeshIssue& i) { return i.kind == kind; });
}

MeshReport validate_mesh(const PolyMesh& mesh) {
    MeshReport rep;
    auto add = [&rep](MeshIssue::Kind k, int e, int edge, std::string msg) { rep.issues.push_back({k, e, edge, std::move(msg)}); };
    for (std::size_t i = 0; i < mesh.nodes.size(); ++i)
        if (!mesh.nodes[i].allFinite()) add(MeshIssue::Kind::NonFinite, -1, -1, "node " + std::to_string(i) + " is not finite");
    if (mesh.scaling_centers) {
        if (mesh.scaling_centers->size() != mesh.elements.size())
            add(MeshIssue::Kind::CenterCount, -1, -1, "scaling center count differs from element count");
        for (const auto& c : *mesh.scaling_centers)
            if (!c.allFinite()) add(MeshIssue::Kind::NonFinite, -1, -1, "scaling center is not finite");
    }
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& loop = mesh.elements[static_cast<std::size_t>(e)];
        const std::string tag = "element " + std::to_string(e);
        if (loop.size() < 3) {
            add(MeshIssue::Kind::TooFewNodes, e, -1, tag + " has fewer than 3 nodes");
            continue;
        }
        bool bad_index = false;
        for (int n : loop)
            if (n < 0 || n >= mesh.num_nodes()) bad_index = true;
        if (bad_index) {
            add(MeshIssue::Kind::BadIndex, e, -1, tag + " references a nonexistent node");
            continue;
        }
        std::vector<int> sorted = loop;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            add(MeshIssue::Kind::RepeatedNode, e, -1, tag + " repeats a node index");
            continue;
        }
        const double area = element_area(mesh, e);
        if (!std::isfinite(area)) continue;
        double scale = 0.0;
        for (int n : loop) scale = std::max(scale, (mesh.nodes[static_cast<std::size_t>(n)] - mesh.nodes[static_cast<std::size_t>(loop[0])]).norm());
        if (std::abs(area) <= 1e-14 * scale * scale) {
            add(MeshIssue::Kind::ZeroArea, e, -1, tag + " has zero area");
            continue;
        }
        if (area < 0.0) {
            add(MeshIssue::Kind::Orientation, e, -1, tag + " is clockwise");
            continue;
        }
        if (mesh.scaling_centers && mesh.scaling_centers->size() != mesh.elements.size()) continue;
        const Vec2 x0 = mesh.scaling_center(e);
        for (std::size_t i = 0; i < loop.size(); ++i) {
            const Vec2& a = mesh.nodes[static_cast<std::size_t>(loop[i])];
            const Vec2& b = mesh.nodes[static_cast<std::size_t>(loop[(i + 1) % loop.size()])];
            if (!(0.5 * cross2(a - x0, b - x0) > 1e-12 * area))
                add(MeshIssue::Kind::DegenerateSection, e, static_cast<int>(i), tag + " edge " + std::to_string(i) + " gives a non-positive section");
        }
    }
    return rep;
}

std::vector<BoundaryEdge> boundary_edges(const PolyMesh& mesh) {
    std::map<std::pair<int, int>, std::pair<int, int>> count;  // key (min,max) -> (uses, element)
    std::map<std::pair<int, int>, std::pair<int, int>> oriented;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& loop = mesh.elements[static_cast<std::size_t>(e)];
        for (std::size_t i = 0; i < loop.size(); ++i) {
            const int a = loop[i], b = loop[(i + 1) % loop.size()];
            const auto key = std::minmax(a, b);
            auto& c = count[{key.first, key.second}];
            c.first += 1;
            c.second = e;
            oriented[{key.first, key.second}] = {a, b};
        }
    }
    std::vector<BoundaryEdge> out;
    for (const auto& [key, c] : count) {
        if (c.first == 1) {
            const auto& ab = oriented[key];
            out.push_back({ab.first, ab.second, c.second});
        }
    }
    return out;
}

}  // namespace plateforge
