#ifndef TRIODFLOW_INTERSECT_HPP
#define TRIODFLOW_INTERSECT_HPP

#include <optional>
#include <vector>

#include "triodflow/triod.hpp"

namespace triodflow {

// Transversal intersection of two segments; t1, t2 are the parameters on
// [a0,a1] and [b0,b1]. Parallel and collinear pairs report nothing.
struct SegmentHit {
    double t1 = 0.0;
    double t2 = 0.0;
    Vec2 point;
};

std::optional<SegmentHit> segment_intersection(const Vec2& a0, const Vec2& a1,
                                               const Vec2& b0, const Vec2& b1);

// A reported self-intersection; the locators name the start nodes of the
// two crossing segments.
struct Intersection {
    NodeLocator first;
    NodeLocator second;
    Vec2 point;
};

// All transversal segment-segment crossings between non-adjacent segments,
// excluding the three pairs that share the junction node. Empty result is
// the discrete embeddedness certificate.
std::vector<Intersection> self_intersections(const Triod& triod);

// Area enclosed by the segment [q,p] and the polyline from p to q: the
// closed loop is split at its self-crossings and the absolute areas of the
// simple sub-loops are summed.
double enclosed_area(const Vec2& p, const Vec2& q, const std::vector<Vec2>& geodesic);

struct LineSpec {
    Vec2 base;
    Vec2 direction;
};

// Transversal crossings of the polyline with an infinite line, counted by
// sign changes of the signed distance sequence; exact zeros are perturbed
// deterministically.
int count_line_intersections(const SampledCurve& curve, const LineSpec& line);

struct GraphWindowResult {
    bool is_graph = false;
    double slope_sup = 0.0;
};

// Restrict the curve to the square window of half-width R aligned with
// `direction` around `center`; the curve is a graph over <direction> when
// the projections are strictly monotone. slope_sup is max 1/|<nu,e2>|.
GraphWindowResult graph_window_check(const SampledCurve& curve, const Vec2& center,
                                     double window_radius, const Vec2& direction);

} // namespace triodflow

#endif
