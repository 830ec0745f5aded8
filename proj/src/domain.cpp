#include "triodflow/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "triodflow/errors.hpp"

namespace triodflow {

DomainShape DomainShape::disc(Vec2 center, double radius) {
    if (!(radius > 0.0)) throw ConfigError("disc radius must be positive");
    DomainShape d;
    d.kind_ = Kind::Disc;
    d.center_ = center;
    d.radius_ = radius;
    return d;
}

DomainShape DomainShape::convex_polygon(std::vector<Vec2> vertices) {
    const std::size_t n = vertices.size();
    if (n < 3) throw ConfigError("polygon needs at least 3 vertices");
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 e0 = vertices[(i + 1) % n] - vertices[i];
        Vec2 e1 = vertices[(i + 2) % n] - vertices[(i + 1) % n];
        if (!(e0.cross(e1) > 0.0))
            throw ConfigError("polygon must be strictly convex and counterclockwise");
    }
    DomainShape d;
    d.kind_ = Kind::ConvexPolygon;
    d.vertices_ = std::move(vertices);
    return d;
}

namespace {

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b, Vec2* closest = nullptr) {
    Vec2 ab = b - a;
    double t = ab.norm2() > 0.0 ? (p - a).dot(ab) / ab.norm2() : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    Vec2 c = a + ab * t;
    if (closest) *closest = c;
    return dist(p, c);
}

} // namespace

double DomainShape::signed_distance(const Vec2& p) const {
    if (kind_ == Kind::Disc) return dist(p, center_) - radius_;
    const std::size_t n = vertices_.size();
    double d_boundary = std::numeric_limits<double>::max();
    bool inside = true;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = vertices_[i];
        const Vec2& b = vertices_[(i + 1) % n];
        d_boundary = std::min(d_boundary, point_segment_distance(p, a, b));
        if ((b - a).cross(p - a) <= 0.0) inside = false;
    }
    return inside ? -d_boundary : d_boundary;
}

bool DomainShape::contains(const Vec2& p, double margin) const {
    return signed_distance(p) < -margin;
}

bool DomainShape::on_boundary(const Vec2& p, double tol) const {
    return std::abs(signed_distance(p)) <= tol;
}

Vec2 DomainShape::project_to_boundary(const Vec2& p) const {
    if (kind_ == Kind::Disc) {
        Vec2 r = p - center_;
        double n = r.norm();
        if (n == 0.0) return center_ + Vec2{radius_, 0.0};
        return center_ + r * (radius_ / n);
    }
    double best = std::numeric_limits<double>::max();
    Vec2 best_point = vertices_.front();
    const std::size_t n = vertices_.size();
    for (std::size_t i = 0; i < n; ++i) {
        Vec2 c;
        double d = point_segment_distance(p, vertices_[i], vertices_[(i + 1) % n], &c);
        if (d < best) { best = d; best_point = c; }
    }
    return best_point;
}

Vec2 DomainShape::pull_inside(const Vec2& p, double offset) const {
    if (contains(p, offset)) return p;
    Vec2 b = project_to_boundary(p);
    if (kind_ == Kind::Disc) {
        Vec2 inward = (center_ - b).normalized();
        return b + inward * offset;
    }
    // For polygons step toward the centroid.
    Vec2 centroid{0.0, 0.0};
    for (const Vec2& v : vertices_) centroid += v;
    centroid = centroid / static_cast<double>(vertices_.size());
    return b + (centroid - b).normalized() * offset;
}

double DomainShape::scale() const {
    Vec2 lo, hi;
    bounding_box(lo, hi);
    return (hi - lo).norm();
}

void DomainShape::bounding_box(Vec2& lo, Vec2& hi) const {
    if (kind_ == Kind::Disc) {
        lo = center_ - Vec2{radius_, radius_};
        hi = center_ + Vec2{radius_, radius_};
        return;
    }
    lo = hi = vertices_.front();
    for (const Vec2& v : vertices_) {
        lo.x = std::min(lo.x, v.x);
        lo.y = std::min(lo.y, v.y);
        hi.x = std::max(hi.x, v.x);
        hi.y = std::max(hi.y, v.y);
    }
}

} // namespace triodflow
