#include "triodflow/steiner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "triodflow/errors.hpp"

namespace triodflow {

namespace {

double triangle_scale(const Vec2& p1, const Vec2& p2, const Vec2& p3) {
    return std::max({dist(p1, p2), dist(p2, p3), dist(p3, p1)});
}

// Interior angle at `at` in the triangle (at, b, c).
double interior_angle(const Vec2& at, const Vec2& b, const Vec2& c) {
    const Vec2 u = b - at;
    const Vec2 v = c - at;
    const double cosang = std::clamp(u.dot(v) / (u.norm() * v.norm()), -1.0, 1.0);
    return std::acos(cosang);
}

// Apex of the equilateral triangle built on edge [a,b], on the side away
// from `opposite`.
Vec2 outward_apex(const Vec2& a, const Vec2& b, const Vec2& opposite) {
    const Vec2 mid = (a + b) * 0.5;
    const Vec2 offset = (b - a).perp() * (std::sqrt(3.0) / 2.0);
    const Vec2 apex_plus = mid + offset;
    const Vec2 apex_minus = mid - offset;
    return dist2(apex_plus, opposite) > dist2(apex_minus, opposite) ? apex_plus : apex_minus;
}

Vec2 weiszfeld_polish(const std::array<Vec2, 3>& p, Vec2 x, int iters, double tol) {
    for (int it = 0; it < iters; ++it) {
        Vec2 num{0.0, 0.0};
        double den = 0.0;
        for (const Vec2& pi : p) {
            const double d = dist(x, pi);
            if (d < 1e-14) return pi;
            num += pi / d;
            den += 1.0 / d;
        }
        const Vec2 next = num / den;
        const double step = dist(next, x);
        x = next;
        if (step < tol) break;
    }
    return x;
}

double max_angle_defect(const std::array<Vec2, 3>& p, const Vec2& x) {
    std::array<Vec2, 3> dir;
    for (int i = 0; i < 3; ++i) dir[i] = (p[i] - x).normalized();
    double worst = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double cosang = std::clamp(dir[i].dot(dir[(i + 1) % 3]), -1.0, 1.0);
        worst = std::max(worst, std::abs(std::acos(cosang) - 2.0 * M_PI / 3.0));
    }
    return worst;
}

} // namespace

Vec2 weiszfeld(const Vec2& p1, const Vec2& p2, const Vec2& p3, int max_iters, double tol) {
    const std::array<Vec2, 3> p{p1, p2, p3};
    const double scale = triangle_scale(p1, p2, p3);
    if (std::abs((p2 - p1).cross(p3 - p1)) <= 1e-12 * scale * scale)
        throw CollinearPoints("weiszfeld requires non-collinear points");
    return weiszfeld_polish(p, (p1 + p2 + p3) / 3.0, max_iters, tol * scale);
}

SteinerSolution fermat_point(const Vec2& p1, const Vec2& p2, const Vec2& p3) {
    const std::array<Vec2, 3> p{p1, p2, p3};
    const double scale = triangle_scale(p1, p2, p3);
    if (std::abs((p2 - p1).cross(p3 - p1)) <= 1e-12 * scale * scale)
        throw CollinearPoints("fermat_point requires non-collinear points");

    SteinerSolution sol;
    const double wide = 2.0 * M_PI / 3.0 - 1e-9;
    for (int i = 0; i < 3; ++i) {
        if (interior_angle(p[i], p[(i + 1) % 3], p[(i + 2) % 3]) >= wide) {
            sol.kind = SteinerSolution::Kind::Degenerate;
            sol.degenerate_vertex = i;
            sol.segments = {{p[i], p[(i + 1) % 3]}, {p[i], p[(i + 2) % 3]}};
            sol.total_length = dist(p[i], p[(i + 1) % 3]) + dist(p[i], p[(i + 2) % 3]);
            return sol;
        }
    }

    // Torricelli: the lines from each vertex to the outward apex of the
    // opposite edge meet at the Fermat point.
    const Vec2 apex1 = outward_apex(p2, p3, p1);
    const Vec2 apex2 = outward_apex(p3, p1, p2);
    const Vec2 d1 = apex1 - p1;
    const Vec2 d2 = apex2 - p2;
    const double denom = d1.cross(d2);
    Vec2 x = (p1 + p2 + p3) / 3.0;
    if (std::abs(denom) > 1e-14 * d1.norm() * d2.norm()) {
        const double t = (p2 - p1).cross(d2) / denom;
        x = p1 + d1 * t;
    }
    x = weiszfeld_polish(p, x, 5, 0.0);
    if (max_angle_defect(p, x) > 1e-9)
        x = weiszfeld_polish(p, x, 200, 1e-16 * scale);
    if (max_angle_defect(p, x) > 1e-9)
        throw Error("fermat point failed the 120 degree certificate");

    sol.kind = SteinerSolution::Kind::Interior;
    sol.fermat = x;
    sol.segments = {{x, p1}, {x, p2}, {x, p3}};
    sol.total_length = dist(x, p1) + dist(x, p2) + dist(x, p3);
    return sol;
}

namespace {

double point_to_segment(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    double t = ab.norm2() > 0.0 ? (p - a).dot(ab) / ab.norm2() : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return dist(p, a + ab * t);
}

double point_to_polyline(const Vec2& p, const std::vector<Vec2>& poly) {
    double best = std::numeric_limits<double>::max();
    for (std::size_t j = 0; j + 1 < poly.size(); ++j)
        best = std::min(best, point_to_segment(p, poly[j], poly[j + 1]));
    return best;
}

} // namespace

SteinerComparison compare_to_steiner(const Triod& triod, const SteinerSolution& sol) {
    // Endpoint sets must match (any assignment).
    std::vector<Vec2> sol_ends;
    for (const auto& seg : sol.segments) sol_ends.push_back(seg[1]);
    if (sol.kind == SteinerSolution::Kind::Degenerate)
        sol_ends.push_back(sol.segments[0][0]);
    const double scale = std::max(triod.domain.scale(), 1e-12);
    for (const Vec2& e : triod.endpoints) {
        double best = std::numeric_limits<double>::max();
        for (const Vec2& s : sol_ends) best = std::min(best, dist(e, s));
        if (best > 1e-9 * scale)
            throw std::invalid_argument("triod endpoints do not match the Steiner solution");
    }

    SteinerComparison cmp;
    cmp.junction_dist = sol.kind == SteinerSolution::Kind::Interior
                            ? dist(triod.junction(), sol.fermat)
                            : std::numeric_limits<double>::infinity();
    cmp.length_gap = triod.total_length() - sol.total_length;

    // Symmetric Hausdorff distance between the triod polylines and the
    // densified oracle segments.
    const double spacing = std::max(1e-6 * scale, 0.25 * triod.min_chord());
    std::vector<std::vector<Vec2>> oracle_polys;
    std::vector<Vec2> oracle_samples;
    for (const auto& seg : sol.segments) {
        oracle_polys.push_back({seg[0], seg[1]});
        const int steps = std::max(1, static_cast<int>(std::ceil(dist(seg[0], seg[1]) / spacing)));
        for (int s = 0; s <= steps; ++s)
            oracle_samples.push_back(seg[0] + (seg[1] - seg[0]) * (static_cast<double>(s) / steps));
    }
    double h = 0.0;
    for (const auto& curve : triod.curves)
        for (const Vec2& node : curve.points) {
            double best = std::numeric_limits<double>::max();
            for (const auto& poly : oracle_polys)
                best = std::min(best, point_to_polyline(node, poly));
            h = std::max(h, best);
        }
    for (const Vec2& s : oracle_samples) {
        double best = std::numeric_limits<double>::max();
        for (const auto& curve : triod.curves)
            best = std::min(best, point_to_polyline(s, curve.points));
        h = std::max(h, best);
    }
    cmp.hausdorff = h;
    return cmp;
}

} // namespace triodflow
