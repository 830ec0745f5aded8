#ifndef TRIODFLOW_DOMAIN_HPP
#define TRIODFLOW_DOMAIN_HPP

#include <vector>

#include "triodflow/vec2.hpp"

namespace triodflow {

// The ambient convex domain Omega: a disc or a strictly convex polygon
// with counterclockwise vertices.
class DomainShape {
public:
    enum class Kind { Disc, ConvexPolygon };

    static DomainShape disc(Vec2 center, double radius);
    static DomainShape convex_polygon(std::vector<Vec2> vertices);

    Kind kind() const { return kind_; }
    Vec2 disc_center() const { return center_; }
    double disc_radius() const { return radius_; }
    const std::vector<Vec2>& vertices() const { return vertices_; }

    // Signed distance to the boundary, negative inside.
    double signed_distance(const Vec2& p) const;
    bool contains(const Vec2& p, double margin = 0.0) const;
    bool on_boundary(const Vec2& p, double tol) const;
    Vec2 project_to_boundary(const Vec2& p) const;
    // Nearest interior point at `offset` inward from the boundary.
    Vec2 pull_inside(const Vec2& p, double offset) const;

    // Characteristic length used to scale tolerances.
    double scale() const;
    void bounding_box(Vec2& lo, Vec2& hi) const;

private:
    DomainShape() = default;
    Kind kind_ = Kind::Disc;
    Vec2 center_;
    double radius_ = 1.0;
    std::vector<Vec2> vertices_;
};

} // namespace triodflow

#endif
