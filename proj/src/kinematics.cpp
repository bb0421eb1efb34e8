#include "plateforge/kinematics.hpp"

#include "plateforge/errors.hpp"

namespace plateforge {

Eigen::Vector3d section_shape_values(double xi, double eta) {
    const auto nb = eval_boundary_shapes(eta);
    return {xi * nb.values(0), xi * nb.values(1), 1.0 - xi};
}

Eigen::Matrix<double, 2, 3> section_shape_gradients(const SectionFrame& f, double eta) {
    const auto nb = eval_boundary_shapes(eta);
    Eigen::Matrix<double, 2, 3> g;
    g.col(0) = f.g1_contra * nb.values(0) + f.g2_contra * nb.derivatives(0);
    g.col(1) = f.g1_contra * nb.values(1) + f.g2_contra * nb.derivatives(1);
    g.col(2) = -f.g1_contra;
    return g;
}

StrainOperatorSet eval_standard_operators(const Section& s, double xi, double eta, bool with_membrane) {
    const SectionFrame f = eval_section_frame(s, xi, eta);
    const auto nb = eval_boundary_shapes(eta);
    const Eigen::Vector3d r(nb.values(0), nb.values(1), -1.0);                 // d/dxi
    const Eigen::Vector3d m(xi * nb.derivatives(0), xi * nb.derivatives(1), 0.0);  // d/deta, center term cancels
    const Eigen::Vector3d n = section_shape_values(xi, eta);
    const Vec2& g1 = f.g1_contra;
    const Vec2& g2 = f.g2_contra;

    StrainOperatorSet op;
    op.xi = xi;
    op.with_membrane = with_membrane;
    op.m1.setZero();
    op.m2.setZero();
    op.b1.setZero();
    op.b2.setZero();
    op.s1.setZero();
    op.s2.setZero();
    op.s3.setZero();
    for (int a = 0; a < 3; ++a) {
        const Vec2 d1 = g1 * r(a);
        const Vec2 d2 = g2 * m(a);
        const int cm = 2 * a, cp = 3 * a;

        op.m1(0, cm) = d1.x();
        op.m1(1, cm + 1) = d1.y();
        op.m1(2, cm) = d1.y();
        op.m1(2, cm + 1) = d1.x();
        op.m2(0, cm) = d2.x();
        op.m2(1, cm + 1) = d2.y();
        op.m2(2, cm) = d2.y();
        op.m2(2, cm + 1) = d2.x();

        op.b1(0, cp + 1) = d1.x();
        op.b1(1, cp + 2) = -d1.y();
        op.b1(2, cp + 1) = d1.y();
        op.b1(2, cp + 2) = -d1.x();
        op.b2(0, cp + 1) = d2.x();
        op.b2(1, cp + 2) = -d2.y();
        op.b2(2, cp + 1) = d2.y();
        op.b2(2, cp + 2) = -d2.x();

        op.s1(0, cp) = d1.x();
        op.s1(1, cp) = d1.y();
        op.s2(0, cp) = d2.x();
        op.s2(1, cp) = d2.y();
        op.s3(0, cp + 1) = n(a);
        op.s3(1, cp + 2) = -n(a);
    }
    op.b_m = op.m1 + op.m2 / xi;
    op.b_b = op.b1 + op.b2 / xi;
    op.b_s = op.s1 + op.s2 / xi + op.s3;
    return op;
}

namespace {

// Covariant shear strain w,d + beta_x dx - beta_y dy with the rotation taken as
// the mean of two nodal blocks and the w-difference between node `to` and `from`.
Eigen::Matrix<double, 1, 9> tying_row(double scale, int from, int to, const Vec2& dx, int rot_a, int rot_b) {
    Eigen::Matrix<double, 1, 9> row = Eigen::Matrix<double, 1, 9>::Zero();
    row(3 * to) += scale;
    row(3 * from) -= scale;
    for (int blk : {rot_a, rot_b}) {
        row(3 * blk + 1) += 0.5 * dx.x();
        row(3 * blk + 2) -= 0.5 * dx.y();
    }
    return row;
}

}  // namespace

Eigen::Matrix<double, 2, 9> ans_natural_operator(const Section& s, double xi, double eta) {
    if (!(xi >= 0.0 && xi <= 1.0)) throw ArgumentError("xi must lie in [0, 1]");
    if (!(eta >= -1.0 && eta <= 1.0)) throw ArgumentError("eta must lie in [-1, 1]");
    // Block indices: 0 = node1, 1 = node2, 2 = center.
    const auto ga = tying_row(0.5, 0, 1, 0.5 * (s.x2 - s.x1), 0, 1);
    const auto gb = tying_row(1.0, 2, 1, s.x2 - s.x0, 1, 2);
    const auto gc = tying_row(1.0, 2, 0, s.x1 - s.x0, 0, 2);
    Eigen::Matrix<double, 2, 9> out;
    out.row(0) = 0.5 * (1.0 + eta) * gb + 0.5 * (1.0 - eta) * gc;
    out.row(1) = xi * ga;
    return out;
}

Eigen::Matrix<double, 2, 9> eval_ans_shear_operator(const Section& s, double xi, double eta) {
    // J^-1 * [g_xi; xi * g_A] = G^1 g_xi + G^2 g_A: the result does not depend on xi.
    if (!(xi >= 0.0 && xi <= 1.0)) throw ArgumentError("xi must lie in [0, 1]");
    const SectionFrame f = eval_section_frame(s, 1.0, eta);
    const auto nat = ans_natural_operator(s, 1.0, eta);
    Eigen::Matrix<double, 2, 9> out;
    for (int c = 0; c < 9; ++c) {
        const Vec2 g = f.g1_contra * nat(0, c) + f.g2_contra * nat(1, c);
        out(0, c) = g.x();
        out(1, c) = g.y();
    }
    return out;
}

}  // namespace plateforge
