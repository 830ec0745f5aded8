#include "triodflow/intersect.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "triodflow/errors.hpp"

namespace triodflow {

std::optional<SegmentHit> segment_intersection(const Vec2& a0, const Vec2& a1,
                                               const Vec2& b0, const Vec2& b1) {
    const Vec2 d1 = a1 - a0;
    const Vec2 d2 = b1 - b0;
    const double denom = d1.cross(d2);
    const double scale = d1.norm() * d2.norm();
    if (std::abs(denom) <= 1e-14 * scale) return std::nullopt;
    const Vec2 r = b0 - a0;
    const double t1 = r.cross(d2) / denom;
    const double t2 = r.cross(d1) / denom;
    const double lo = -1e-12, hi = 1.0 + 1e-12;
    if (t1 < lo || t1 > hi || t2 < lo || t2 > hi) return std::nullopt;
    return SegmentHit{t1, t2, a0 + d1 * t1};
}

namespace {

struct IndexedSegment {
    Vec2 a, b;
    double min_x, max_x, min_y, max_y;
    int curve, node;
};

IndexedSegment make_indexed(const Vec2& a, const Vec2& b, int curve, int node) {
    return {a, b,
            std::min(a.x, b.x), std::max(a.x, b.x),
            std::min(a.y, b.y), std::max(a.y, b.y),
            curve, node};
}

bool shares_junction(const IndexedSegment& s, const IndexedSegment& t) {
    return s.node == 0 && t.node == 0;
}

bool adjacent_on_curve(const IndexedSegment& s, const IndexedSegment& t) {
    return s.curve == t.curve && std::abs(s.node - t.node) <= 1;
}

} // namespace

std::vector<Intersection> self_intersections(const Triod& triod) {
    std::vector<IndexedSegment> segs;
    for (int i = 0; i < 3; ++i) {
        const auto& pts = triod.curves[i].points;
        for (std::size_t j = 0; j + 1 < pts.size(); ++j)
            segs.push_back(make_indexed(pts[j], pts[j + 1], i, static_cast<int>(j)));
    }
    // Sweep and prune on x-intervals.
    std::sort(segs.begin(), segs.end(),
              [](const IndexedSegment& a, const IndexedSegment& b) { return a.min_x < b.min_x; });

    std::vector<Intersection> hits;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        for (std::size_t j = i + 1; j < segs.size() && segs[j].min_x <= segs[i].max_x; ++j) {
            const IndexedSegment& s = segs[i];
            const IndexedSegment& t = segs[j];
            if (t.min_y > s.max_y || t.max_y < s.min_y) continue;
            if (adjacent_on_curve(s, t) || shares_junction(s, t)) continue;
            if (auto hit = segment_intersection(s.a, s.b, t.a, t.b)) {
                Intersection out;
                out.first = {s.curve, s.node};
                out.second = {t.curve, t.node};
                out.point = hit->point;
                if (out.second.curve < out.first.curve ||
                    (out.second.curve == out.first.curve && out.second.node < out.first.node))
                    std::swap(out.first, out.second);
                hits.push_back(out);
            }
        }
    }
    std::sort(hits.begin(), hits.end(), [](const Intersection& a, const Intersection& b) {
        if (a.first.curve != b.first.curve) return a.first.curve < b.first.curve;
        if (a.first.node != b.first.node) return a.first.node < b.first.node;
        if (a.second.curve != b.second.curve) return a.second.curve < b.second.curve;
        return a.second.node < b.second.node;
    });
    return hits;
}

namespace {

double shoelace_abs(const std::vector<Vec2>& poly) {
    if (poly.size() < 3) return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i)
        twice += poly[i].cross(poly[(i + 1) % poly.size()]);
    return std::abs(twice) * 0.5;
}

struct WalkNode {
    Vec2 point;
    int crossing_id; // -1 for original vertices
};

} // namespace

double enclosed_area(const Vec2& p, const Vec2& q, const std::vector<Vec2>& geodesic) {
    // Closed loop: geodesic from p to q plus the chord back to p.
    std::vector<Vec2> loop;
    loop.reserve(geodesic.size() + 2);
    loop.push_back(p);
    for (const Vec2& v : geodesic)
        if (dist(loop.back(), v) > 0.0) loop.push_back(v);
    if (dist(loop.back(), q) > 0.0) loop.push_back(q);
    if (loop.size() >= 2 && dist(loop.front(), loop.back()) == 0.0) loop.pop_back();
    const std::size_t m = loop.size();
    if (m < 3) return 0.0;

    // Crossings between non-adjacent loop edges (cyclic adjacency).
    struct EdgeCrossing {
        double t;
        int id;
        Vec2 point;
    };
    std::vector<std::vector<EdgeCrossing>> per_edge(m);
    int next_id = 0;
    struct EdgeBox {
        double min_x, max_x, min_y, max_y;
        std::size_t index;
    };
    std::vector<EdgeBox> boxes(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Vec2& a = loop[i];
        const Vec2& b = loop[(i + 1) % m];
        boxes[i] = {std::min(a.x, b.x), std::max(a.x, b.x),
                    std::min(a.y, b.y), std::max(a.y, b.y), i};
    }
    std::sort(boxes.begin(), boxes.end(),
              [](const EdgeBox& a, const EdgeBox& b) { return a.min_x < b.min_x; });
    const double t_margin = 1e-12;
    for (std::size_t bi = 0; bi < m; ++bi) {
        for (std::size_t bj = bi + 1; bj < m && boxes[bj].min_x <= boxes[bi].max_x; ++bj) {
            if (boxes[bj].min_y > boxes[bi].max_y || boxes[bj].max_y < boxes[bi].min_y) continue;
            std::size_t i = boxes[bi].index, j = boxes[bj].index;
            if (i > j) std::swap(i, j);
            if (j == i + 1 || (i == 0 && j == m - 1)) continue;
            auto hit = segment_intersection(loop[i], loop[(i + 1) % m],
                                            loop[j], loop[(j + 1) % m]);
            if (!hit) continue;
            // Endpoint grazes are not crossings that bound a sub-loop.
            if (hit->t1 < t_margin || hit->t1 > 1.0 - t_margin ||
                hit->t2 < t_margin || hit->t2 > 1.0 - t_margin)
                continue;
            per_edge[i].push_back({hit->t1, next_id, hit->point});
            per_edge[j].push_back({hit->t2, next_id, hit->point});
            ++next_id;
        }
    }

    if (next_id == 0) return shoelace_abs(loop);

    // Refined cyclic walk with crossing points inserted in parameter order.
    std::vector<WalkNode> walk;
    walk.reserve(m + 2 * static_cast<std::size_t>(next_id));
    for (std::size_t i = 0; i < m; ++i) {
        walk.push_back({loop[i], -1});
        auto& xs = per_edge[i];
        std::sort(xs.begin(), xs.end(),
                  [](const EdgeCrossing& a, const EdgeCrossing& b) { return a.t < b.t; });
        for (const auto& c : xs) walk.push_back({c.point, c.id});
    }

    // Stack decomposition: popping between the two occurrences of a
    // crossing id extracts one simple sub-loop.
    double area = 0.0;
    std::vector<WalkNode> stack;
    std::vector<int> position_of_id(next_id, -1);
    for (const WalkNode& node : walk) {
        if (node.crossing_id >= 0 && position_of_id[node.crossing_id] >= 0) {
            const int base = position_of_id[node.crossing_id];
            std::vector<Vec2> sub;
            sub.reserve(stack.size() - base);
            for (std::size_t s = base; s < stack.size(); ++s) sub.push_back(stack[s].point);
            area += shoelace_abs(sub);
            for (std::size_t s = base + 1; s < stack.size(); ++s)
                if (stack[s].crossing_id >= 0) position_of_id[stack[s].crossing_id] = -1;
            stack.resize(base + 1);
            position_of_id[node.crossing_id] = -1;
            continue;
        }
        if (node.crossing_id >= 0)
            position_of_id[node.crossing_id] = static_cast<int>(stack.size());
        stack.push_back(node);
    }
    std::vector<Vec2> rest;
    rest.reserve(stack.size());
    for (const WalkNode& node : stack) rest.push_back(node.point);
    area += shoelace_abs(rest);
    return area;
}

int count_line_intersections(const SampledCurve& curve, const LineSpec& line) {
    const double dn = line.direction.norm();
    if (!(dn > 0.0)) throw InvalidLocator("line direction must be nonzero");
    const Vec2 d = line.direction / dn;
    const double nudge = 1e-14 * curve.diameter();
    std::vector<double> s(curve.points.size());
    for (std::size_t j = 0; j < curve.points.size(); ++j) {
        s[j] = d.cross(curve.points[j] - line.base);
        if (s[j] == 0.0) s[j] = nudge > 0.0 ? nudge : 1e-300;
    }
    int count = 0;
    for (std::size_t j = 0; j + 1 < s.size(); ++j)
        if (s[j] * s[j + 1] < 0.0) ++count;
    return count;
}

GraphWindowResult graph_window_check(const SampledCurve& curve, const Vec2& center,
                                     double window_radius, const Vec2& direction) {
    if (!(window_radius > 0.0)) throw InvalidLocator("window radius must be positive");
    const Vec2 e1 = direction.normalized();
    const Vec2 e2 = e1.perp();
    const CurveGeometry geom = differentiate(curve);

    std::vector<std::size_t> inside;
    for (std::size_t j = 0; j < curve.points.size(); ++j) {
        const Vec2 r = curve.points[j] - center;
        if (std::abs(r.dot(e1)) <= window_radius && std::abs(r.dot(e2)) <= window_radius)
            inside.push_back(j);
    }
    if (inside.empty()) throw EmptyWindow("no curve nodes inside the window");

    GraphWindowResult out;
    bool increasing = true, decreasing = true;
    double prev_u = (curve.points[inside[0]] - center).dot(e1);
    for (std::size_t idx = 1; idx < inside.size(); ++idx) {
        const double u = (curve.points[inside[idx]] - center).dot(e1);
        if (u <= prev_u) increasing = false;
        if (u >= prev_u) decreasing = false;
        prev_u = u;
    }
    out.is_graph = inside.size() == 1 || increasing || decreasing;

    double sup = 0.0;
    for (std::size_t j : inside) {
        const double c = std::abs(geom.nu[j].dot(e2));
        sup = std::max(sup, c > 0.0 ? 1.0 / c : std::numeric_limits<double>::infinity());
    }
    out.slope_sup = sup;
    return out;
}

} // namespace triodflow
