#include <doctest.h>

#include <cmath>
#include <numbers>

#include "plateforge/errors.hpp"
#include "plateforge/mesh.hpp"

using namespace plateforge;

namespace {
double mesh_area(const PolyMesh& m) {
    double a = 0.0;
    for (int e = 0; e < m.num_elements(); ++e) a += element_area(m, e);
    return a;
}
}  // namespace

TEST_CASE("domain signed distance and containment") {
    const DomainSpec r = DomainSpec::rectangle({0, 0}, {2, 1});
    CHECK(r.signed_distance({1, 0.5}) == doctest::Approx(-0.5));
    CHECK(r.signed_distance({3, 0.5}) == doctest::Approx(1.0));
    CHECK(r.area() == doctest::Approx(2.0));

    const DomainSpec c = DomainSpec::circle({0, 0}, 2);
    CHECK(c.signed_distance({0, 0}) == doctest::Approx(-2.0));
    CHECK(c.area() == doctest::Approx(4 * std::numbers::pi));
    CHECK((c.project_to_boundary({1, 1}) - Vec2(std::sqrt(2.0), std::sqrt(2.0))).norm() < 1e-12);

    const DomainSpec lb = DomainSpec::l_bracket_with_holes();
    CHECK(lb.holes().size() == 3);
    CHECK(lb.contains({0.5, 3.0}));
    CHECK_FALSE(lb.contains({0.5, 0.5}));  // hole centre
    CHECK_FALSE(lb.contains({3.0, 1.0}));  // outside both arms
    CHECK(lb.contains({3.0, 5.2}));
    CHECK_FALSE(lb.contains({3.5, 5.5}));  // third hole
}

TEST_CASE("structured meshes") {
    const PolyMesh q = generate_structured_mesh({0, 0}, {2, 1}, 4, 3, CellShape::Quad);
    CHECK(q.num_elements() == 12);
    CHECK(q.num_nodes() == 20);
    CHECK(validate_mesh(q).ok());
    CHECK(mesh_area(q) == doctest::Approx(2.0));

    const PolyMesh t = generate_structured_mesh({0, 0}, {1, 1}, 3, 3, CellShape::Tri);
    CHECK(t.num_elements() == 18);
    CHECK(validate_mesh(t).ok());
    CHECK(boundary_edges(t).size() == 12);
}

TEST_CASE("regular polygon and section decomposition") {
    for (int n = 3; n <= 8; ++n) {
        const PolyMesh m = regular_polygon_mesh(n, 1.0);
        const double area = 0.5 * n * std::sin(2 * std::numbers::pi / n);
        CHECK(element_area(m, 0) == doctest::Approx(area));
        const auto secs = decompose_into_sections(m, 0);
        REQUIRE(secs.size() == static_cast<std::size_t>(n));
        double sum = 0.0;
        for (const auto& s : secs) {
            CHECK(s.signed_area() > 0.0);
            sum += s.signed_area();
        }
        CHECK(sum == doctest::Approx(area));
    }
}

TEST_CASE("mesh validation reports defects") {
    PolyMesh m = generate_structured_mesh({0, 0}, {1, 1}, 1, 1, CellShape::Quad);
    std::reverse(m.elements[0].begin(), m.elements[0].end());
    CHECK(validate_mesh(m).has(MeshIssue::Kind::Orientation));

    PolyMesh bad = generate_structured_mesh({0, 0}, {1, 1}, 1, 1, CellShape::Quad);
    bad.elements[0][2] = 17;
    CHECK(validate_mesh(bad).has(MeshIssue::Kind::BadIndex));

    PolyMesh c = generate_structured_mesh({0, 0}, {1, 1}, 1, 1, CellShape::Quad);
    c.scaling_centers = std::vector<Vec2>{Vec2(5.0, 5.0)};
    CHECK_FALSE(validate_mesh(c).ok());
}

TEST_CASE("center node distortion") {
    PolyMesh m = generate_structured_mesh({0, 0}, {50, 50}, 2, 2, CellShape::Quad);
    const PolyMesh moved = distort_center_node(m, 3.0, ScalingCenterPolicy::Moving);
    bool found = false;
    for (const auto& p : moved.nodes) found = found || (p - Vec2(28, 22)).norm() < 1e-12;
    CHECK(found);
    CHECK_FALSE(moved.scaling_centers.has_value());
    CHECK(mesh_area(moved) == doctest::Approx(2500.0));

    m.scaling_centers = std::vector<Vec2>{{12.5, 12.5}, {37.5, 12.5}, {12.5, 37.5}, {37.5, 37.5}};
    const PolyMesh fixed = distort_center_node(m, 3.0, ScalingCenterPolicy::Fixed);
    REQUIRE(fixed.scaling_centers.has_value());
    CHECK(((*fixed.scaling_centers)[1] - Vec2(37.5, 12.5)).norm() == 0.0);
}

TEST_CASE("Voronoi meshes") {
    const DomainSpec rect = DomainSpec::rectangle({0, 0}, {2, 1});
    const VoronoiResult a = generate_voronoi(rect, 60, DensityField{}, 50, 3);
    CHECK(a.mesh.num_elements() == 60);
    CHECK(validate_mesh(a.mesh).ok());
    CHECK(mesh_area(a.mesh) == doctest::Approx(2.0).epsilon(1e-10));

    SUBCASE("same seed gives the same mesh") {
        const VoronoiResult b = generate_voronoi(rect, 60, DensityField{}, 50, 3);
        REQUIRE(b.mesh.nodes.size() == a.mesh.nodes.size());
        for (std::size_t i = 0; i < a.mesh.nodes.size(); ++i) CHECK((a.mesh.nodes[i] - b.mesh.nodes[i]).norm() == 0.0);
        CHECK(a.mesh.elements == b.mesh.elements);
    }
    SUBCASE("Lloyd relaxation settles") {
        REQUIRE(a.lloyd_displacements.size() >= 2);
        CHECK(a.lloyd_displacements.back() < a.lloyd_displacements.front());
    }
    SUBCASE("circle boundary nodes lie on the circle") {
        const PolyMesh m = generate_voronoi_mesh(DomainSpec::circle({0, 0}, 1), 80, DensityField{}, 30, 1);
        CHECK(validate_mesh(m).ok());
        for (const auto& e : boundary_edges(m)) CHECK(std::abs(m.nodes[e.a].norm() - 1.0) < 1e-9);
        CHECK(mesh_area(m) == doctest::Approx(std::numbers::pi).epsilon(0.02));
    }
    SUBCASE("density attractor concentrates cells") {
        DensityField d;
        d.background = 0.2;
        d.attractors.push_back({Vec2(0.25, 0.5), 0.2});
        const PolyMesh m = generate_voronoi_mesh(rect, 100, d, 50, 4);
        int near = 0;
        for (int e = 0; e < m.num_elements(); ++e) near += (element_centroid(m, e) - Vec2(0.25, 0.5)).norm() < 0.4;
        // The disc covers about a quarter of the domain area.
        CHECK(near > 40);
    }
    CHECK_THROWS_AS(generate_voronoi(rect, 0, DensityField{}, 10, 1), ArgumentError);
}
