#pragma once

#include <Eigen/Core>

namespace plateforge {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

// Degrees of freedom carried by a point (mesh node or scaling center).
enum class Dof { Ux, Uy, W, BetaX, BetaY };

// Index of a DOF inside the per-point block. The plate-only layout is
// [w, beta_x, beta_y]; the layout with membrane is [u_x, u_y, w, beta_x, beta_y].
inline int dof_index(Dof d, bool with_membrane) {
    const int shift = with_membrane ? 2 : 0;
    switch (d) {
        case Dof::Ux: return with_membrane ? 0 : -1;
        case Dof::Uy: return with_membrane ? 1 : -1;
        case Dof::W: return shift;
        case Dof::BetaX: return shift + 1;
        case Dof::BetaY: return shift + 2;
    }
    return -1;
}

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

}  // namespace plateforge
