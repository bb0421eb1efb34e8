#include "plateforge/geometry.hpp"

#include <Eigen/LU>

#include "plateforge/errors.hpp"

namespace plateforge {

BoundaryShapeEval eval_boundary_shapes(double eta) {
    if (!(eta >= -1.0 && eta <= 1.0)) throw ArgumentError("eta must lie in [-1, 1]");
    return {{0.5 * (1.0 - eta), 0.5 * (1.0 + eta)}, {-0.5, 0.5}};
}

RadialShapeEval eval_radial_shapes(double xi) {
    if (!(xi >= 0.0 && xi <= 1.0)) throw ArgumentError("xi must lie in [0, 1]");
    return {{xi, 1.0 - xi}, {1.0, -1.0}};
}

Eigen::Matrix2d SectionFrame::jacobian() const {
    Eigen::Matrix2d j = jbar;
    j.row(1) *= xi;
    return j;
}

Eigen::Matrix2d SectionFrame::inverse_jacobian() const {
    // J^-1 = [G^1  G^2 / xi] so that J^-1 * J = I.
    Eigen::Matrix2d inv;
    inv.col(0) = g1_contra;
    inv.col(1) = g2_contra / xi;
    return inv;
}

SectionFrame eval_section_frame(const Section& s, double xi, double eta) {
    if (!(xi > 0.0 && xi <= 1.0)) throw ArgumentError("xi must lie in (0, 1]");
    const auto nb = eval_boundary_shapes(eta);
    const Vec2 xbar = nb.values(0) * s.x1 + nb.values(1) * s.x2;
    const Vec2 xbar_eta = nb.derivatives(0) * s.x1 + nb.derivatives(1) * s.x2;
    SectionFrame f;
    f.xi = xi;
    f.jbar.row(0) = (xbar - s.x0).transpose();
    f.jbar.row(1) = xbar_eta.transpose();
    f.det_jbar = f.jbar.determinant();
    if (!(f.det_jbar > 0.0))
        throw DegenerateSectionError(s.slots[2], -1, "section frame has non-positive det(Jbar)");
    f.g1_contra = Vec2(xbar_eta.y(), -xbar_eta.x()) / f.det_jbar;
    f.g2_contra = Vec2(-(xbar.y() - s.x0.y()), xbar.x() - s.x0.x()) / f.det_jbar;
    return f;
}

Vec2 map_to_physical(const Section& s, double xi, double eta) {
    if (!(xi >= 0.0 && xi <= 1.0)) throw ArgumentError("xi must lie in [0, 1]");
    const auto nb = eval_boundary_shapes(eta);
    const Vec2 xbar = nb.values(0) * s.x1 + nb.values(1) * s.x2;
    return s.x0 + xi * (xbar - s.x0);
}

}  // namespace plateforge
