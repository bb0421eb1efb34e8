#include "plateforge/material.hpp"

#include <cmath>

#include "plateforge/errors.hpp"

namespace plateforge {

namespace {

void check_elastic(double E, double nu) {
    if (!(E > 0.0) || !std::isfinite(E)) throw ArgumentError("Young's modulus must be positive");
    if (!(nu > -1.0 && nu < 0.5)) throw ArgumentError("Poisson's ratio must lie in (-1, 0.5)");
}

}  // namespace

PlateMaterial2D plate_constitutive_2d(double E, double nu, double t, double k) {
    check_elastic(E, nu);
    if (!(t > 0.0)) throw ArgumentError("thickness must be positive");
    if (!(k > 0.0)) throw ArgumentError("shear correction factor must be positive");
    PlateMaterial2D m;
    m.E = E;
    m.nu = nu;
    m.t = t;
    m.k = k;
    m.c_m << 1.0, nu, 0.0, nu, 1.0, 0.0, 0.0, 0.0, 0.5 * (1.0 - nu);
    m.c_m *= E * t / (1.0 - nu * nu);
    m.c_b = (t * t / 12.0) * m.c_m;
    m.c_s = (E * t * k / (2.0 * (1.0 + nu))) * Eigen::Matrix2d::Identity();
    m.D = E * t * t * t / (12.0 * (1.0 - nu * nu));
    return m;
}

Elasticity3D elasticity_3d(double E, double nu) {
    check_elastic(E, nu);
    Elasticity3D c;
    c.lambda = E * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
    c.mu = E / (2.0 * (1.0 + nu));
    c.cc.setZero();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) c.cc(i, j) = c.lambda;
        c.cc(i, i) += 2.0 * c.mu;
        c.cc(3 + i, 3 + i) = c.mu;
    }
    return c;
}

Eigen::Matrix<double, 6, 8> thickness_a1(double zeta) {
    Eigen::Matrix<double, 6, 8> a = Eigen::Matrix<double, 6, 8>::Zero();
    a(0, 0) = 1.0;
    a(0, 3) = zeta;
    a(1, 1) = 1.0;
    a(1, 4) = zeta;
    a(3, 2) = 1.0;
    a(3, 5) = zeta;
    a(4, 6) = 1.0;
    a(5, 7) = 1.0;
    return a;
}

Eigen::MatrixXd thickness_a2(double zeta, ThicknessMode mode) {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6, mode == ThicknessMode::Linear ? 2 : 1);
    a(2, 0) = 1.0;
    if (mode == ThicknessMode::Linear) a(2, 1) = zeta;
    return a;
}

IntegratedThicknessBlocks integrate_thickness_blocks(const Elasticity3D& c, double t, ThicknessMode mode, double k) {
    if (!(t > 0.0)) throw ArgumentError("thickness must be positive");
    Eigen::Matrix<double, 6, 6> cc = c.cc;
    cc(4, 4) *= k;
    cc(5, 5) *= k;
    // A(zeta) = A0 + zeta * A1z, so the integrand is quadratic in zeta; integrate
    // with the moments of [-t/2, t/2]: {t, 0, t^3/12}.
    const double m0 = t, m2 = t * t * t / 12.0;
    const Eigen::Matrix<double, 6, 8> a1_0 = thickness_a1(0.0);
    const Eigen::Matrix<double, 6, 8> a1_1 = thickness_a1(1.0) - a1_0;
    const Eigen::MatrixXd a2_0 = thickness_a2(0.0, mode);
    const Eigen::MatrixXd a2_1 = thickness_a2(1.0, mode) - a2_0;

    IntegratedThicknessBlocks b;
    b.mode = mode;
    b.d11 = m0 * a1_0.transpose() * cc * a1_0 + m2 * a1_1.transpose() * cc * a1_1;
    b.d12 = m0 * a1_0.transpose() * cc * a2_0 + m2 * a1_1.transpose() * cc * a2_1;
    b.d22 = m0 * a2_0.transpose() * cc * a2_0 + m2 * a2_1.transpose() * cc * a2_1;
    return b;
}

void MaterialModel::validate() const {
    check_elastic(E, nu);
    if (!(t > 0.0)) throw ArgumentError("thickness must be positive");
    if (!(k > 0.0)) throw ArgumentError("shear correction factor must be positive");
}

std::string to_string(MaterialLaw law) { return law == MaterialLaw::Plate2D ? "plate2d" : "solid3d"; }
std::string to_string(ThicknessMode mode) { return mode == ThicknessMode::Linear ? "linear" : "constant"; }

}  // namespace plateforge
