#pragma once

#include <string>
#include <variant>
#include <vector>

#include "plateforge/types.hpp"

namespace plateforge {

struct CircleShape {
    Vec2 center{0.0, 0.0};
    double radius = 1.0;
};

// Straight piece of a domain boundary.
struct BoundarySegment {
    Vec2 a;
    Vec2 b;
};

// Circular arc of a domain boundary. Points of the arc satisfy |p - center| = radius
// and lie inside the angular sector [start_angle, end_angle] (radians, CCW).
struct BoundaryArc {
    Vec2 center;
    double radius;
    double start_angle;
    double end_angle;
};

using BoundaryPiece = std::variant<BoundarySegment, BoundaryArc>;

Vec2 closest_point(const BoundaryPiece& piece, const Vec2& p);

// Planar plate domain: an outer boundary (rectangle, circle or the L-bracket
// outline) with optional circular holes.
class DomainSpec {
public:
    enum class Kind { Rectangle, Circle, LBracket };

    static DomainSpec rectangle(Vec2 lo, Vec2 hi);
    static DomainSpec circle(Vec2 center, double radius);
    // Vertical arm [0,arm]x[0,height], horizontal arm [0,width]x[height-arm,height],
    // concave fillet of the given radius in the re-entrant corner.
    static DomainSpec l_bracket(double width = 4.0, double height = 6.0, double arm = 1.0,
                                double fillet_radius = 0.25);
    // L-bracket with its three default bolt holes (diameter 0.5).
    static DomainSpec l_bracket_with_holes();

    DomainSpec& add_hole(Vec2 center, double radius);

    Kind kind() const { return kind_; }
    const std::vector<CircleShape>& holes() const { return holes_; }

    // Negative inside, positive outside; magnitude is the distance to the boundary.
    double signed_distance(const Vec2& p) const;
    bool contains(const Vec2& p, double tol = 0.0) const { return signed_distance(p) <= tol; }
    Vec2 project_to_boundary(const Vec2& p) const;

    const std::vector<BoundaryPiece>& boundary_pieces() const { return pieces_; }
    std::pair<Vec2, Vec2> bounding_box() const;
    double diameter() const;
    double area() const;

    // Rectangle parameters (valid for Kind::Rectangle).
    Vec2 rect_lo() const { return lo_; }
    Vec2 rect_hi() const { return hi_; }
    CircleShape outer_circle() const { return outer_circle_; }

    void validate() const;

private:
    double outer_sdf_sign_source(const Vec2& p) const;

    Kind kind_ = Kind::Rectangle;
    Vec2 lo_{0.0, 0.0};
    Vec2 hi_{1.0, 1.0};
    CircleShape outer_circle_;
    double lb_width_ = 4.0, lb_height_ = 6.0, lb_arm_ = 1.0, lb_fillet_ = 0.25;
    std::vector<CircleShape> holes_;
    std::vector<BoundaryPiece> pieces_;
};

// Mesh density used for locally refined Voronoi meshes:
// rho(x) = background + sum_i exp(-|x - c_i|^2 / (2 sigma_i^2)).
struct DensityAttractor {
    Vec2 center;
    double sigma;
};

struct DensityField {
    std::vector<DensityAttractor> attractors;
    double background = 1.0;

    static DensityField uniform() { return {}; }
    double operator()(const Vec2& p) const;
    double upper_bound() const;
    bool is_uniform() const { return attractors.empty(); }
    void validate() const;
};

}  // namespace plateforge
