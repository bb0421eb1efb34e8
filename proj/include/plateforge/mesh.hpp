#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "plateforge/domain.hpp"
#include "plateforge/types.hpp"

namespace plateforge {

// Discretized plate midsurface: nodes, counter-clockwise polygonal elements and
// optional explicit scaling centers (one per element). When no scaling centers
// are stored, each element uses its area centroid.
struct PolyMesh {
    std::vector<Vec2> nodes;
    std::vector<std::vector<int>> elements;
    std::optional<std::vector<Vec2>> scaling_centers;

    int num_nodes() const { return static_cast<int>(nodes.size()); }
    int num_elements() const { return static_cast<int>(elements.size()); }
    Vec2 scaling_center(int element) const;
};

double polygon_signed_area(const std::vector<Vec2>& loop);
Vec2 polygon_centroid(const std::vector<Vec2>& loop);
std::vector<Vec2> element_coordinates(const PolyMesh& mesh, int element);
double element_area(const PolyMesh& mesh, int element);
Vec2 element_centroid(const PolyMesh& mesh, int element);

// One triangular SBFEM section: scaling center x0 and the boundary edge x1 -> x2.
// slots hold the mesh node indices of x1 and x2 and the element index of x0.
struct Section {
    Vec2 x0;
    Vec2 x1;
    Vec2 x2;
    std::array<int, 3> slots{-1, -1, -1};

    double signed_area() const { return 0.5 * cross2(x1 - x0, x2 - x0); }
};

// One section per polygon edge. Throws DegenerateSectionError when a section has
// area below 1e-12 times the element area.
std::vector<Section> decompose_into_sections(const PolyMesh& mesh, int element);

enum class CellShape { Quad, Tri };

PolyMesh generate_structured_mesh(Vec2 lo, Vec2 hi, int nx, int ny, CellShape shape);
PolyMesh generate_structured_mesh(const DomainSpec& rect, int nx, int ny, CellShape shape);

// Regular n-gon centred at the origin with one vertex on the positive x axis.
PolyMesh regular_polygon_mesh(int n_sides, double circumradius);

enum class ScalingCenterPolicy { Moving, Fixed };

// Moves the node shared by four elements by (+s, -s). With the Fixed policy the
// mesh's explicit scaling centers are kept (and a displaced node landing on one of
// them is rejected); with Moving they are dropped so each element uses its centroid.
PolyMesh distort_center_node(const PolyMesh& mesh, double s, ScalingCenterPolicy policy = ScalingCenterPolicy::Moving);

struct MeshIssue {
    enum class Kind { NonFinite, BadIndex, TooFewNodes, RepeatedNode, Orientation, ZeroArea, DegenerateSection, CenterCount };
    Kind kind;
    int element = -1;
    int edge = -1;
    std::string message;
};

struct MeshReport {
    std::vector<MeshIssue> issues;
    bool ok() const { return issues.empty(); }
    bool has(MeshIssue::Kind kind) const;
    // Messages joined with "; ".
    std::string summary() const;
};

MeshReport validate_mesh(const PolyMesh& mesh);

// Boundary edges: edges used by exactly one element, as (node a, node b, element).
struct BoundaryEdge {
    int a;
    int b;
    int element;
};
std::vector<BoundaryEdge> boundary_edges(const PolyMesh& mesh);

// Voronoi meshing ------------------------------------------------------------

struct VoronoiOptions {
    double lloyd_tolerance = 2e-3;
    int max_retries = 3;
    // Edges shorter than this fraction of the mean cell size are collapsed.
    double collapse_fraction = 0.1;
};

struct VoronoiResult {
    PolyMesh mesh;
    std::vector<double> lloyd_displacements;
    int iterations = 0;
    int retries = 0;
};

VoronoiResult generate_voronoi(const DomainSpec& domain, int n_elements, const DensityField& density,
                               int max_lloyd_iters, std::uint64_t seed, const VoronoiOptions& options = {});

PolyMesh generate_voronoi_mesh(const DomainSpec& domain, int n_elements, const DensityField& density,
                               int max_lloyd_iters, std::uint64_t seed);

}  // namespace plateforge
