#pragma once

#include <Eigen/Core>

#include "plateforge/geometry.hpp"

namespace plateforge {

// Column blocks are ordered (node1, node2, scaling center). Plate blocks carry
// [w, beta_x, beta_y]; membrane blocks carry [u_x, u_y].
//
// Each operator is split as B = B1 + B2 / xi (+ S3 for shear), where B1 collects
// the xi-derivative terms, B2 the eta-derivative terms and S3 the shape-value terms.
struct StrainOperatorSet {
    using Mat36 = Eigen::Matrix<double, 3, 6>;
    using Mat39 = Eigen::Matrix<double, 3, 9>;
    using Mat29 = Eigen::Matrix<double, 2, 9>;

    Mat36 m1, m2, b_m;
    Mat39 b1, b2, b_b;
    Mat29 s1, s2, s3, b_s;
    double xi = 1.0;
    bool with_membrane = false;
};

StrainOperatorSet eval_standard_operators(const Section& section, double xi, double eta, bool with_membrane = false);

// Tying points of the assumed natural shear strain field.
struct TyingPoint {
    double xi;
    double eta;
};
inline constexpr TyingPoint kTyingA{1.0, 0.0};
inline constexpr TyingPoint kTyingB{0.5, 1.0};
inline constexpr TyingPoint kTyingC{0.5, -1.0};

// Interpolated covariant shear strains (gamma_xi, gamma_eta) as a 2x9 operator.
Eigen::Matrix<double, 2, 9> ans_natural_operator(const Section& section, double xi, double eta);

// Cartesian assumed shear strains gamma = J^-1 * gamma_natural. Valid for xi in [0, 1].
Eigen::Matrix<double, 2, 9> eval_ans_shear_operator(const Section& section, double xi, double eta);

// Shape function values (node1, node2, center) at (xi, eta).
Eigen::Vector3d section_shape_values(double xi, double eta);

// Cartesian gradients of the three section shape functions (columns node1, node2,
// center; rows d/dx, d/dy). The 1/xi factor of J^-1 is cancelled analytically.
Eigen::Matrix<double, 2, 3> section_shape_gradients(const SectionFrame& frame, double eta);

}  // namespace plateforge
