#pragma once

#include <Eigen/Core>

#include "plateforge/mesh.hpp"

namespace plateforge {

// Linear shape functions along the section boundary (eta in [-1, 1]).
struct BoundaryShapeEval {
    Eigen::Vector2d values;
    Eigen::Vector2d derivatives;
};

// Linear shape functions in the scaling direction: N1 = xi, N2 = 1 - xi.
struct RadialShapeEval {
    Eigen::Vector2d values;
    Eigen::Vector2d derivatives;
};

BoundaryShapeEval eval_boundary_shapes(double eta);
RadialShapeEval eval_radial_shapes(double xi);

// Parameterization of a section at (xi, eta). jbar rows are the covariant
// vectors G1 = Xbar - X0 and G2 = dXbar/deta; g1_contra, g2_contra are the dual
// (contravariant) vectors with G_a . G^b = delta_ab.
struct SectionFrame {
    Eigen::Matrix2d jbar;
    double det_jbar = 0.0;
    Vec2 g1_contra;
    Vec2 g2_contra;
    double xi = 1.0;

    // Full Jacobian d(x,y)/d(xi,eta) arranged row-wise like jbar: diag(1, xi) * jbar.
    Eigen::Matrix2d jacobian() const;
    Eigen::Matrix2d inverse_jacobian() const;
    double det_jacobian() const { return xi * det_jbar; }
};

SectionFrame eval_section_frame(const Section& section, double xi, double eta);

Vec2 map_to_physical(const Section& section, double xi, double eta);

}  // namespace plateforge
