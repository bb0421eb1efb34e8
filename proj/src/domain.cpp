#include "plateforge/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "plateforge/errors.hpp"

namespace plateforge {

namespace {

Vec2 closest_on_segment(const BoundarySegment& s, const Vec2& p) {
    const Vec2 d = s.b - s.a;
    const double len2 = d.squaredNorm();
    if (len2 == 0.0) return s.a;
    const double u = std::clamp((p - s.a).dot(d) / len2, 0.0, 1.0);
    return s.a + u * d;
}

double wrap_angle(double a) {
    const double two_pi = 2.0 * std::numbers::pi;
    a = std::fmod(a, two_pi);
    if (a < 0.0) a += two_pi;
    return a;
}

Vec2 closest_on_arc(const BoundaryArc& arc, const Vec2& p) {
    const Vec2 rel = p - arc.center;
    const double span = arc.end_angle - arc.start_angle;
    const Vec2 pa = arc.center + arc.radius * Vec2(std::cos(arc.start_angle), std::sin(arc.start_angle));
    const Vec2 pb = arc.center + arc.radius * Vec2(std::cos(arc.end_angle), std::sin(arc.end_angle));
    if (rel.norm() == 0.0) return pa;
    const double ang = wrap_angle(std::atan2(rel.y(), rel.x()) - arc.start_angle);
    if (span >= 2.0 * std::numbers::pi - 1e-14 || ang <= span) return arc.center + arc.radius * rel.normalized();
    return (p - pa).squaredNorm() <= (p - pb).squaredNorm() ? pa : pb;
}

bool in_box(const Vec2& p, double x0, double y0, double x1, double y1) {
    return p.x() >= x0 && p.x() <= x1 && p.y() >= y0 && p.y() <= y1;
}

}  // namespace

Vec2 closest_point(const BoundaryPiece& piece, const Vec2& p) {
    return std::visit(
        [&](const auto& s) -> Vec2 {
            if constexpr (std::is_same_v<std::decay_t<decltype(s)>, BoundarySegment>)
                return closest_on_segment(s, p);
            else
                return closest_on_arc(s, p);
        },
        piece);
}

DomainSpec DomainSpec::rectangle(Vec2 lo, Vec2 hi) {
    if (!(hi.x() > lo.x() && hi.y() > lo.y())) throw ArgumentError("rectangle domain must have positive extent");
    DomainSpec d;
    d.kind_ = Kind::Rectangle;
    d.lo_ = lo;
    d.hi_ = hi;
    const Vec2 c1(hi.x(), lo.y()), c3(lo.x(), hi.y());
    d.pieces_ = {BoundarySegment{lo, c1}, BoundarySegment{c1, hi}, BoundarySegment{hi, c3}, BoundarySegment{c3, lo}};
    return d;
}

DomainSpec DomainSpec::circle(Vec2 center, double radius) {
    if (!(radius > 0.0)) throw ArgumentError("circle domain needs a positive radius");
    DomainSpec d;
    d.kind_ = Kind::Circle;
    d.outer_circle_ = {center, radius};
    d.pieces_ = {BoundaryArc{center, radius, 0.0, 2.0 * std::numbers::pi}};
    return d;
}

DomainSpec DomainSpec::l_bracket(double width, double height, double arm, double fillet_radius) {
    if (!(arm > 0.0 && width > arm + fillet_radius && height > arm + fillet_radius && fillet_radius >= 0.0))
        throw ArgumentError("inconsistent L-bracket dimensions");
    DomainSpec d;
    d.kind_ = Kind::LBracket;
    d.lb_width_ = width;
    d.lb_height_ = height;
    d.lb_arm_ = arm;
    d.lb_fillet_ = fillet_radius;
    const double f = fillet_radius;
    const double yc = height - arm;
    const Vec2 p0(0.0, 0.0), p1(arm, 0.0), p2(arm, yc - f), p3(arm + f, yc), p4(width, yc), p5(width, height),
        p6(0.0, height);
    d.pieces_.push_back(BoundarySegment{p0, p1});
    d.pieces_.push_back(BoundarySegment{p1, p2});
    if (f > 0.0)
        d.pieces_.push_back(BoundaryArc{Vec2(arm + f, yc - f), f, 0.5 * std::numbers::pi, std::numbers::pi});
    d.pieces_.push_back(BoundarySegment{p3, p4});
    d.pieces_.push_back(BoundarySegment{p4, p5});
    d.pieces_.push_back(BoundarySegment{p5, p6});
    d.pieces_.push_back(BoundarySegment{p6, p0});
    return d;
}

DomainSpec DomainSpec::l_bracket_with_holes() {
    DomainSpec d = l_bracket();
    d.add_hole({0.5, 0.5}, 0.25);
    d.add_hole({0.5, 5.5}, 0.25);
    d.add_hole({3.5, 5.5}, 0.25);
    return d;
}

DomainSpec& DomainSpec::add_hole(Vec2 center, double radius) {
    if (!(radius > 0.0)) throw ArgumentError("hole radius must be positive");
    holes_.push_back({center, radius});
    pieces_.push_back(BoundaryArc{center, radius, 0.0, 2.0 * std::numbers::pi});
    validate();
    return *this;
}

void DomainSpec::validate() const {
    for (const auto& h : holes_) {
        // Hole must lie strictly inside the outer boundary.
        const double d_outer = outer_sdf_sign_source(h.center);
        if (!(d_outer < 0.0)) throw ArgumentError("hole center outside the domain");
        double dist = std::numeric_limits<double>::infinity();
        for (const auto& piece : pieces_) {
            if (const auto* arc = std::get_if<BoundaryArc>(&piece);
                arc && arc->center == h.center && arc->radius == h.radius)
                continue;
            bool is_other_hole = false;
            if (const auto* arc = std::get_if<BoundaryArc>(&piece)) {
                for (const auto& o : holes_)
                    if (o.center == arc->center && o.radius == arc->radius) is_other_hole = true;
            }
            if (is_other_hole) continue;
            dist = std::min(dist, (closest_point(piece, h.center) - h.center).norm());
        }
        if (!(dist > h.radius)) throw ArgumentError("hole intersects the outer boundary");
    }
}

// Negative strictly inside the outer boundary, ignoring holes.
double DomainSpec::outer_sdf_sign_source(const Vec2& p) const {
    switch (kind_) {
        case Kind::Rectangle: return in_box(p, lo_.x(), lo_.y(), hi_.x(), hi_.y()) ? -1.0 : 1.0;
        case Kind::Circle: return (p - outer_circle_.center).norm() <= outer_circle_.radius ? -1.0 : 1.0;
        case Kind::LBracket: {
            const double a = lb_arm_, f = lb_fillet_, yc = lb_height_ - a;
            if (in_box(p, 0.0, 0.0, a, lb_height_)) return -1.0;
            if (in_box(p, 0.0, yc, lb_width_, lb_height_)) return -1.0;
            if (f > 0.0 && in_box(p, a, yc - f, a + f, yc) && (p - Vec2(a + f, yc - f)).norm() >= f) return -1.0;
            return 1.0;
        }
    }
    return 1.0;
}

double DomainSpec::signed_distance(const Vec2& p) const {
    double dist = std::numeric_limits<double>::infinity();
    for (const auto& piece : pieces_) dist = std::min(dist, (closest_point(piece, p) - p).norm());
    bool inside = outer_sdf_sign_source(p) < 0.0;
    for (const auto& h : holes_)
        if ((p - h.center).norm() < h.radius) inside = false;
    return inside ? -dist : dist;
}

Vec2 DomainSpec::project_to_boundary(const Vec2& p) const {
    Vec2 best = p;
    double best_d = std::numeric_limits<double>::infinity();
    for (const auto& piece : pieces_) {
        const Vec2 q = closest_point(piece, p);
        const double d = (q - p).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = q;
        }
    }
    return best;
}

std::pair<Vec2, Vec2> DomainSpec::bounding_box() const {
    switch (kind_) {
        case Kind::Rectangle: return {lo_, hi_};
        case Kind::Circle: {
            const Vec2 r(outer_circle_.radius, outer_circle_.radius);
            return {outer_circle_.center - r, outer_circle_.center + r};
        }
        case Kind::LBracket: return {Vec2(0.0, 0.0), Vec2(lb_width_, lb_height_)};
    }
    return {lo_, hi_};
}

double DomainSpec::diameter() const {
    const auto [lo, hi] = bounding_box();
    return (hi - lo).norm();
}

double DomainSpec::area() const {
    double a = 0.0;
    switch (kind_) {
        case Kind::Rectangle: a = (hi_ - lo_).prod(); break;
        case Kind::Circle: a = std::numbers::pi * outer_circle_.radius * outer_circle_.radius; break;
        case Kind::LBracket: {
            const double f = lb_fillet_;
            a = lb_arm_ * lb_height_ + (lb_width_ - lb_arm_) * lb_arm_ + f * f * (1.0 - std::numbers::pi / 4.0);
            break;
        }
    }
    for (const auto& h : holes_) a -= std::numbers::pi * h.radius * h.radius;
    return a;
}

double DensityField::operator()(const Vec2& p) const {
    double rho = background;
    for (const auto& a : attractors) rho += std::exp(-(p - a.center).squaredNorm() / (2.0 * a.sigma * a.sigma));
    return rho;
}

double DensityField::upper_bound() const { return background + static_cast<double>(attractors.size()); }

void DensityField::validate() const {
    if (!(background > 0.0)) throw ArgumentError("density background must be positive");
    for (const auto& a : attractors)
        if (!(a.sigma > 0.0 && a.sigma <= 1.0)) throw ArgumentError("density attractor sigma must lie in (0, 1]");
}

}  // namespace plateforge
