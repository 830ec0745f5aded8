#ifndef TRIODFLOW_TRIOD_HPP
#define TRIODFLOW_TRIOD_HPP

#include <array>
#include <vector>

#include "triodflow/curve.hpp"
#include "triodflow/domain.hpp"

namespace triodflow {

// Node address on a triod: curve in {0,1,2}, node in {0..N}.
struct NodeLocator {
    int curve = 0;
    int node = 0;
};

struct TriodTolerances {
    double angle = 1e-8;     // |sum of junction tangents|
    double boundary = 1e-7;  // endpoint distance to the domain boundary, relative to scale
};

// Three curves meeting at a common junction O = curves[i].points[0], with
// fixed outer endpoints on the domain boundary. Curves are labeled
// counterclockwise by junction tangent angle; the modulo-three junction
// identities assume that ordering.
struct Triod {
    std::array<SampledCurve, 3> curves;
    std::array<Vec2, 3> endpoints;
    DomainShape domain = DomainShape::disc({0.0, 0.0}, 1.0);

    Vec2 junction() const { return curves[0].points.front(); }
    double total_length() const;
    double min_curve_length() const;
    double min_chord() const;

    const Vec2& at(const NodeLocator& loc) const;

    // Structural invariants: concurrency, endpoint anchoring, regularity,
    // containment in the domain, junction angle balance. Embeddedness is
    // checked separately (see self_intersections).
    void validate(const TriodTolerances& tol = {}) const;
};

std::array<CurveGeometry, 3> differentiate(const Triod& triod);

// Unique simple path between two triod nodes: along one curve, or through
// the junction without duplicating the junction node.
std::vector<Vec2> tree_geodesic(const Triod& triod, const NodeLocator& a,
                                const NodeLocator& b);

} // namespace triodflow

#endif
