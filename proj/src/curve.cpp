#include "triodflow/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "triodflow/errors.hpp"

namespace triodflow {

double SampledCurve::chord_length() const {
    double total = 0.0;
    for (std::size_t j = 0; j + 1 < points.size(); ++j)
        total += dist(points[j], points[j + 1]);
    return total;
}

double SampledCurve::min_chord() const {
    double m = std::numeric_limits<double>::max();
    for (std::size_t j = 0; j + 1 < points.size(); ++j)
        m = std::min(m, dist(points[j], points[j + 1]));
    return m;
}

double SampledCurve::diameter() const {
    if (points.empty()) return 0.0;
    Vec2 lo = points.front(), hi = points.front();
    for (const Vec2& p : points) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }
    return (hi - lo).norm();
}

bool SampledCurve::finite() const {
    for (const Vec2& p : points)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
    return true;
}

void SampledCurve::validate(std::size_t min_segments) const {
    if (segment_count() < min_segments)
        throw InvariantViolation("curve has fewer segments than required");
    if (!finite())
        throw InvariantViolation("curve has non-finite coordinates");
    const double floor = 1e-12 * diameter();
    for (std::size_t j = 0; j + 1 < points.size(); ++j)
        if (dist(points[j], points[j + 1]) <= floor)
            throw DegenerateSegment("degenerate chord at node " + std::to_string(j));
}

CurveGeometry differentiate(const SampledCurve& curve) {
    curve.validate(3);
    const int n = curve.n();
    const double h = 1.0 / n;
    const auto& p = curve.points;

    CurveGeometry g;
    g.tau.resize(n + 1);
    g.nu.resize(n + 1);
    g.k.resize(n + 1);
    g.lambda.resize(n + 1);
    g.v.resize(n + 1);
    g.ds.resize(n + 1);
    g.gamma_x_norm.resize(n + 1);

    for (int j = 0; j <= n; ++j) {
        Vec2 gx, gxx;
        if (j == 0) {
            gx = (p[0] * -3.0 + p[1] * 4.0 - p[2]) / (2.0 * h);
            gxx = (p[0] * 2.0 - p[1] * 5.0 + p[2] * 4.0 - p[3]) / (h * h);
        } else if (j == n) {
            gx = (p[n] * 3.0 - p[n - 1] * 4.0 + p[n - 2]) / (2.0 * h);
            gxx = (p[n] * 2.0 - p[n - 1] * 5.0 + p[n - 2] * 4.0 - p[n - 3]) / (h * h);
        } else {
            gx = (p[j + 1] - p[j - 1]) / (2.0 * h);
            gxx = (p[j + 1] - p[j] * 2.0 + p[j - 1]) / (h * h);
        }
        const double gn = gx.norm();
        if (!(gn > 0.0))
            throw DegenerateSegment("vanishing parameter derivative at node " + std::to_string(j));
        g.gamma_x_norm[j] = gn;
        g.tau[j] = gx / gn;
        g.nu[j] = g.tau[j].perp();
        g.v[j] = gxx / (gn * gn);
        g.k[j] = g.v[j].dot(g.nu[j]);
        g.lambda[j] = g.v[j].dot(g.tau[j]);
        const double w = (j == 0 || j == n) ? 0.5 : 1.0;
        g.ds[j] = w * gn * h;
    }
    return g;
}

std::vector<double> arclength_derivative(const std::vector<double>& f,
                                         const CurveGeometry& geom) {
    const int n = static_cast<int>(f.size()) - 1;
    const double h = 1.0 / n;
    std::vector<double> out(n + 1);
    for (int j = 0; j <= n; ++j) {
        double dfdx;
        if (j == 0)
            dfdx = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
        else if (j == n)
            dfdx = (3.0 * f[n] - 4.0 * f[n - 1] + f[n - 2]) / (2.0 * h);
        else
            dfdx = (f[j + 1] - f[j - 1]) / (2.0 * h);
        out[j] = dfdx / geom.gamma_x_norm[j];
    }
    return out;
}

std::vector<double> arclength_second_derivative(const std::vector<double>& f,
                                                const CurveGeometry& geom) {
    const int n = static_cast<int>(f.size()) - 1;
    const double h = 1.0 / n;
    auto dx = [&](const std::vector<double>& u, int j) {
        if (j == 0) return (-3.0 * u[0] + 4.0 * u[1] - u[2]) / (2.0 * h);
        if (j == n) return (3.0 * u[n] - 4.0 * u[n - 1] + u[n - 2]) / (2.0 * h);
        return (u[j + 1] - u[j - 1]) / (2.0 * h);
    };
    auto dxx = [&](const std::vector<double>& u, int j) {
        if (j == 0) return (2.0 * u[0] - 5.0 * u[1] + 4.0 * u[2] - u[3]) / (h * h);
        if (j == n) return (2.0 * u[n] - 5.0 * u[n - 1] + 4.0 * u[n - 2] - u[n - 3]) / (h * h);
        return (u[j + 1] - 2.0 * u[j] + u[j - 1]) / (h * h);
    };
    std::vector<double> out(n + 1);
    for (int j = 0; j <= n; ++j) {
        const double g = geom.gamma_x_norm[j];
        out[j] = dxx(f, j) / (g * g) - dx(f, j) * dx(geom.gamma_x_norm, j) / (g * g * g);
    }
    return out;
}

SampledCurve resample_arclength(const SampledCurve& curve, std::size_t n_segments) {
    curve.validate(1);
    const auto& p = curve.points;
    const std::size_t m = p.size();

    std::vector<double> cum(m, 0.0);
    for (std::size_t j = 1; j < m; ++j)
        cum[j] = cum[j - 1] + dist(p[j - 1], p[j]);
    const double total = cum.back();

    // Cubic Hermite in the chord-length parameter. Piecewise-linear
    // placement would leave grid-frequency sagitta noise that the second
    // difference amplifies into O(1) curvature error.
    std::vector<Vec2> slope(m);
    for (std::size_t j = 0; j < m; ++j) {
        if (j == 0)
            slope[j] = (p[1] - p[0]) / (cum[1] - cum[0]);
        else if (j == m - 1)
            slope[j] = (p[m - 1] - p[m - 2]) / (cum[m - 1] - cum[m - 2]);
        else
            slope[j] = (p[j + 1] - p[j - 1]) / (cum[j + 1] - cum[j - 1]);
    }

    SampledCurve out;
    out.points.resize(n_segments + 1);
    out.points.front() = p.front();
    out.points.back() = p.back();
    std::size_t seg = 0;
    for (std::size_t i = 1; i < n_segments; ++i) {
        const double target = total * static_cast<double>(i) / static_cast<double>(n_segments);
        while (seg + 2 < m && cum[seg + 1] < target) ++seg;
        const double span = cum[seg + 1] - cum[seg];
        const double t = span > 0.0 ? (target - cum[seg]) / span : 0.0;
        const double t2 = t * t, t3 = t2 * t;
        out.points[i] = p[seg] * (2.0 * t3 - 3.0 * t2 + 1.0) +
                        slope[seg] * (span * (t3 - 2.0 * t2 + t)) +
                        p[seg + 1] * (-2.0 * t3 + 3.0 * t2) +
                        slope[seg + 1] * (span * (t3 - t2));
    }
    return out;
}

SampledCurve make_segment(const Vec2& a, const Vec2& b, std::size_t n_segments) {
    SampledCurve c;
    c.points.resize(n_segments + 1);
    for (std::size_t j = 0; j <= n_segments; ++j) {
        double t = static_cast<double>(j) / static_cast<double>(n_segments);
        c.points[j] = a + (b - a) * t;
    }
    return c;
}

SampledCurve make_arc(const Vec2& center, double radius, double angle0,
                      double angle1, std::size_t n_segments) {
    SampledCurve c;
    c.points.resize(n_segments + 1);
    for (std::size_t j = 0; j <= n_segments; ++j) {
        double a = angle0 + (angle1 - angle0) * static_cast<double>(j) / static_cast<double>(n_segments);
        c.points[j] = center + Vec2{radius * std::cos(a), radius * std::sin(a)};
    }
    return c;
}

} // namespace triodflow
