#include "triodflow/triod.hpp"

#include <algorithm>
#include <cmath>

#include "triodflow/errors.hpp"

namespace triodflow {

double Triod::total_length() const {
    return curves[0].chord_length() + curves[1].chord_length() + curves[2].chord_length();
}

double Triod::min_curve_length() const {
    return std::min({curves[0].chord_length(), curves[1].chord_length(), curves[2].chord_length()});
}

double Triod::min_chord() const {
    return std::min({curves[0].min_chord(), curves[1].min_chord(), curves[2].min_chord()});
}

const Vec2& Triod::at(const NodeLocator& loc) const {
    if (loc.curve < 0 || loc.curve > 2)
        throw InvalidLocator("curve index out of range");
    const auto& pts = curves[loc.curve].points;
    if (loc.node < 0 || loc.node >= static_cast<int>(pts.size()))
        throw InvalidLocator("node index out of range");
    return pts[loc.node];
}

void Triod::validate(const TriodTolerances& tol) const {
    const double scale = domain.scale();
    const Vec2 O = curves[0].points.front();
    for (int i = 0; i < 3; ++i) {
        curves[i].validate();
        if (dist(curves[i].points.front(), O) != 0.0)
            throw InvariantViolation("junction nodes are not identical");
        if (dist(curves[i].points.back(), endpoints[i]) > tol.boundary * scale)
            throw InvariantViolation("curve endpoint detached from its anchor");
        if (!domain.on_boundary(endpoints[i], tol.boundary * scale))
            throw InvariantViolation("endpoint not on the domain boundary");
        const auto& pts = curves[i].points;
        for (std::size_t j = 0; j + 1 < pts.size(); ++j)
            if (!domain.contains(pts[j]))
                throw InvariantViolation("interior node escaped the domain");
    }
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (dist(endpoints[i], endpoints[j]) <= tol.boundary * scale)
                throw InvariantViolation("endpoints are not distinct");

    Vec2 tangent_sum{0.0, 0.0};
    for (int i = 0; i < 3; ++i)
        tangent_sum += differentiate(curves[i]).tau.front();
    if (tangent_sum.norm() > tol.angle)
        throw InvariantViolation("junction angle condition violated");
}

std::array<CurveGeometry, 3> differentiate(const Triod& triod) {
    return {differentiate(triod.curves[0]), differentiate(triod.curves[1]),
            differentiate(triod.curves[2])};
}

std::vector<Vec2> tree_geodesic(const Triod& triod, const NodeLocator& a,
                                const NodeLocator& b) {
    triod.at(a);
    triod.at(b);
    std::vector<Vec2> path;
    if (a.curve == b.curve) {
        const auto& pts = triod.curves[a.curve].points;
        const int lo = std::min(a.node, b.node);
        const int hi = std::max(a.node, b.node);
        path.reserve(hi - lo + 1);
        if (a.node <= b.node)
            for (int j = lo; j <= hi; ++j) path.push_back(pts[j]);
        else
            for (int j = hi; j >= lo; --j) path.push_back(pts[j]);
        return path;
    }
    const auto& pa = triod.curves[a.curve].points;
    const auto& pb = triod.curves[b.curve].points;
    path.reserve(a.node + b.node + 1);
    for (int j = a.node; j >= 0; --j) path.push_back(pa[j]);
    for (int j = 1; j <= b.node; ++j) path.push_back(pb[j]);
    return path;
}

} // namespace triodflow
