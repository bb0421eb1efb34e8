#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "plateforge/errors.hpp"
#include "plateforge/kinematics.hpp"
#include "plateforge/quadrature.hpp"

using namespace plateforge;

namespace {
Section sample_section() {
    Section s;
    s.x0 = {0.3, 0.2};
    s.x1 = {1.4, -0.3};
    s.x2 = {1.1, 1.2};
    return s;
}
}  // namespace

TEST_CASE("quadrature rules") {
    for (int n = 1; n <= 5; ++n) {
        std::vector<double> x, w;
        gauss_legendre(n, x, w);
        for (int p = 0; p < 2 * n; ++p) {
            double got = 0.0;
            for (int i = 0; i < n; ++i) got += w[i] * std::pow(x[i], p);
            const double want = p % 2 ? 0.0 : 2.0 / (p + 1);
            CHECK(got == doctest::Approx(want).epsilon(1e-13));
        }
    }
    double sum = 0.0;
    for (const auto& q : section_rule(3, 2)) {
        CHECK(q.xi > 0.0);
        CHECK(q.xi < 1.0);
        sum += q.weight;
    }
    CHECK(sum == doctest::Approx(2.0));
}

TEST_CASE("shape functions") {
    for (double eta : {-1.0, -0.3, 0.5, 1.0}) {
        const auto b = eval_boundary_shapes(eta);
        CHECK(b.values.sum() == doctest::Approx(1.0));
        CHECK(b.derivatives.sum() == doctest::Approx(0.0));
        for (double xi : {0.0, 0.4, 1.0}) CHECK(section_shape_values(xi, eta).sum() == doctest::Approx(1.0));
    }
    const auto r = eval_radial_shapes(0.25);
    CHECK(r.values(0) == doctest::Approx(0.25));
    CHECK(r.values(1) == doctest::Approx(0.75));
}

TEST_CASE("section frame") {
    const Section s = sample_section();
    const SectionFrame f = eval_section_frame(s, 0.6, 0.2);
    CHECK(f.det_jacobian() > 0.0);
    // 2 * area = integral of det J over the parameter rectangle.
    double area = 0.0;
    for (const auto& q : section_rule(2, 2)) area += q.weight * eval_section_frame(s, q.xi, q.eta).det_jacobian();
    CHECK(area == doctest::Approx(s.signed_area()));
    CHECK((f.jacobian() * f.inverse_jacobian() - Eigen::Matrix2d::Identity()).norm() < 1e-12);
    CHECK(f.g1_contra.dot(f.jbar.row(0).transpose()) == doctest::Approx(1.0));
    CHECK(f.g2_contra.dot(f.jbar.row(0).transpose()) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK((map_to_physical(s, 1.0, -1.0) - s.x1).norm() < 1e-14);
    CHECK((map_to_physical(s, 1.0, 1.0) - s.x2).norm() < 1e-14);
    CHECK((map_to_physical(s, 0.0, 0.3) - s.x0).norm() < 1e-14);
}

TEST_CASE("shape gradients are the constant triangle gradients") {
    const Section s = sample_section();
    Eigen::Matrix3d m;
    m << 1, 1, 1, s.x1.x(), s.x2.x(), s.x0.x(), s.x1.y(), s.x2.y(), s.x0.y();
    const Eigen::Matrix3d inv = m.inverse();
    const Eigen::Matrix<double, 2, 3> want = inv.rightCols<2>().transpose();
    for (double xi : {1e-9, 0.3, 1.0})
        for (double eta : {-1.0, 0.1, 1.0})
            CHECK((section_shape_gradients(eval_section_frame(s, xi, eta), eta) - want).norm() < 1e-10);
}

TEST_CASE("natural assumed shear operator matches the printed coefficients") {
    const Section s = sample_section();
    const double x0 = s.x0.x(), y0 = s.x0.y(), x1 = s.x1.x(), y1 = s.x1.y(), x2 = s.x2.x(), y2 = s.x2.y();
    for (double xi : {0.2, 0.7, 1.0})
        for (double eta : {-1.0, -0.4, 0.6}) {
            Eigen::Matrix<double, 2, 9> want;
            want << 0.5 * (1 - eta), 0.25 * (1 - eta) * (x1 - x0), -0.25 * (1 - eta) * (y1 - y0),  //
                0.5 * (1 + eta), 0.25 * (1 + eta) * (x2 - x0), -0.25 * (1 + eta) * (y2 - y0),     //
                -1.0, 0.25 * ((1 + eta) * x2 + (1 - eta) * x1 - 2 * x0),
                -0.25 * ((1 + eta) * y2 + (1 - eta) * y1 - 2 * y0),  //
                -0.5 * xi, 0.25 * xi * (x2 - x1), -0.25 * xi * (y2 - y1),  //
                0.5 * xi, 0.25 * xi * (x2 - x1), -0.25 * xi * (y2 - y1),   //
                0, 0, 0;
            CHECK((ans_natural_operator(s, xi, eta) - want).norm() < 1e-14);
        }
    CHECK_THROWS_AS(ans_natural_operator(s, 1.5, 0.0), ArgumentError);
}

TEST_CASE("assumed shear strains reproduce linear-w, constant-shear fields") {
    const Section s = sample_section();
    // w = a + b x + c y with constant rotations: the shear strain field is constant.
    const double a = 0.3, b = -0.7, c = 1.1, bx = 0.2, by = -0.4;
    Eigen::Matrix<double, 9, 1> d;
    const Vec2 pts[3] = {s.x1, s.x2, s.x0};
    for (int p = 0; p < 3; ++p) d.segment<3>(3 * p) << a + b * pts[p].x() + c * pts[p].y(), bx, by;
    const Eigen::Vector2d want(b + bx, c - by);
    for (double xi : {0.1, 0.5, 1.0})
        for (double eta : {-0.9, 0.0, 0.8}) {
            CHECK((eval_ans_shear_operator(s, xi, eta) * d - want).norm() < 1e-12);
            CHECK((eval_standard_operators(s, xi, eta).b_s * d - want).norm() < 1e-12);
        }
}
