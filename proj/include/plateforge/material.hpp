#pragma once

#include <Eigen/Core>
#include <string>

namespace plateforge {

struct PlateMaterial2D {
    double E = 0.0, nu = 0.0, t = 0.0, k = 5.0 / 6.0;
    Eigen::Matrix3d c_m;
    Eigen::Matrix3d c_b;
    Eigen::Matrix2d c_s;
    double D = 0.0;  // flexural rigidity E t^3 / (12 (1 - nu^2))
};

PlateMaterial2D plate_constitutive_2d(double E, double nu, double t, double k = 5.0 / 6.0);

// Isotropic 3D elasticity in Voigt order (11, 22, 33, 12, 13, 23), engineering shear strains.
struct Elasticity3D {
    double lambda = 0.0, mu = 0.0;
    Eigen::Matrix<double, 6, 6> cc;
};

Elasticity3D elasticity_3d(double E, double nu);

enum class ThicknessMode { Linear, Constant };

// Thickness-integrated blocks over zeta in [-t/2, t/2]. The geometric strain
// vector is [eps_m (3), kappa (3), gamma (2)]; the thickness-strain vector has
// 2 entries (Linear) or 1 (Constant). The shear correction k scales the
// transverse shear entries of the material matrix before integration.
struct IntegratedThicknessBlocks {
    Eigen::Matrix<double, 8, 8> d11;
    Eigen::MatrixXd d12;
    Eigen::MatrixXd d22;
    ThicknessMode mode = ThicknessMode::Linear;
};

IntegratedThicknessBlocks integrate_thickness_blocks(const Elasticity3D& cc, double t, ThicknessMode mode,
                                                     double k = 1.0);

// Transformation matrices from the generalized strains to the 3D strain at height zeta.
Eigen::Matrix<double, 6, 8> thickness_a1(double zeta);
Eigen::MatrixXd thickness_a2(double zeta, ThicknessMode mode);

enum class MaterialLaw { Plate2D, Solid3D };

struct MaterialModel {
    MaterialLaw law = MaterialLaw::Plate2D;
    double E = 1.0;
    double nu = 0.3;
    double t = 1.0;
    double k = 5.0 / 6.0;
    ThicknessMode mode = ThicknessMode::Linear;

    bool with_membrane() const { return law == MaterialLaw::Solid3D; }
    int dofs_per_point() const { return with_membrane() ? 5 : 3; }
    PlateMaterial2D plate() const { return plate_constitutive_2d(E, nu, t, k); }
    IntegratedThicknessBlocks blocks() const { return integrate_thickness_blocks(elasticity_3d(E, nu), t, mode, k); }
    void validate() const;
};

std::string to_string(MaterialLaw law);
std::string to_string(ThicknessMode mode);

}  // namespace plateforge
