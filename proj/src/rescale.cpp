#include "triodflow/rescale.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "triodflow/errors.hpp"

namespace triodflow {

RescaledFrame rescale_frame(const FlowState& state, const Vec2& x0, double T_hat) {
    if (!(T_hat > state.t))
        throw InvalidHorizon("rescale_frame needs T_hat above the state time");
    const double remaining = T_hat - state.t;
    const double alpha = std::sqrt(2.0 * remaining);

    RescaledFrame frame;
    frame.frak_t = -0.5 * std::log(remaining);
    frame.source_t = state.t;
    frame.x0 = x0;
    frame.T_hat = T_hat;
    for (int i = 0; i < 3; ++i) {
        const SampledCurve& src = state.triod.curves[i];
        const CurveGeometry g = differentiate(src);
        RescaledCurve rc;
        rc.points.reserve(src.points.size());
        for (const Vec2& p : src.points) rc.points.push_back((p - x0) / alpha);
        rc.k_tilde.reserve(g.k.size());
        rc.lambda_tilde.reserve(g.lambda.size());
        for (double k : g.k) rc.k_tilde.push_back(k * alpha);
        for (double l : g.lambda) rc.lambda_tilde.push_back(l * alpha);
        frame.curves.push_back(std::move(rc));
        frame.endpoints_tilde.push_back((state.triod.endpoints[i] - x0) / alpha);
        frame.tau_end.push_back(g.tau.back());
    }
    return frame;
}

RescaledFrame frame_from_curves(const std::vector<SampledCurve>& curves, double frak_t) {
    RescaledFrame frame;
    frame.frak_t = frak_t;
    frame.T_hat = std::exp(-2.0 * frak_t);
    frame.source_t = 0.0;
    for (const auto& src : curves) {
        const CurveGeometry g = differentiate(src);
        RescaledCurve rc;
        rc.points = src.points;
        rc.k_tilde = g.k;
        rc.lambda_tilde = g.lambda;
        frame.curves.push_back(std::move(rc));
        frame.endpoints_tilde.push_back(src.points.back());
        frame.tau_end.push_back(g.tau.back());
    }
    return frame;
}

namespace {

SampledCurve as_curve(const RescaledCurve& rc) {
    SampledCurve c;
    c.points = rc.points;
    return c;
}

double gauss(const Vec2& x) { return std::exp(-0.5 * x.norm2()); }

} // namespace

double rescaled_density(const RescaledFrame& frame) {
    double sum = 0.0;
    for (const auto& rc : frame.curves) {
        const CurveGeometry g = differentiate(as_curve(rc));
        for (std::size_t j = 0; j < rc.points.size(); ++j)
            sum += gauss(rc.points[j]) * g.ds[j];
    }
    return sum / std::sqrt(2.0 * M_PI);
}

double rescaled_monotonicity_integrand(const RescaledFrame& frame) {
    double sum = 0.0;
    for (const auto& rc : frame.curves) {
        const CurveGeometry g = differentiate(as_curve(rc));
        for (std::size_t j = 0; j < rc.points.size(); ++j) {
            const double normal_part = rc.k_tilde[j] + rc.points[j].dot(g.nu[j]);
            sum += normal_part * normal_part * gauss(rc.points[j]) * g.ds[j];
        }
    }
    return sum;
}

std::vector<double> rescaled_endpoint_integrand(const RescaledFrame& frame) {
    std::vector<double> out;
    out.reserve(frame.curves.size());
    for (std::size_t i = 0; i < frame.curves.size(); ++i)
        out.push_back(frame.endpoints_tilde[i].dot(frame.tau_end[i]) *
                      gauss(frame.endpoints_tilde[i]));
    return out;
}

double boundary_term_rescaled_bound(const RescaledFrame& frame) {
    double worst = 0.0;
    for (double v : rescaled_endpoint_integrand(frame)) worst = std::max(worst, std::abs(v));
    return worst;
}

double cumulative_endpoint_integral(const std::vector<RescaledFrame>& frames) {
    if (frames.size() < 2)
        throw InsufficientRecords("cumulative_endpoint_integral needs at least 2 frames");
    const std::size_t ends = frames.front().curves.size();
    std::vector<double> acc(ends, 0.0);
    std::vector<double> prev = rescaled_endpoint_integrand(frames.front());
    for (std::size_t m = 1; m < frames.size(); ++m) {
        const std::vector<double> cur = rescaled_endpoint_integrand(frames[m]);
        const double dfrak = frames[m].frak_t - frames[m - 1].frak_t;
        for (std::size_t i = 0; i < ends; ++i) acc[i] += 0.5 * dfrak * (prev[i] + cur[i]);
        prev = cur;
    }
    double worst = 0.0;
    for (double v : acc) worst = std::max(worst, std::abs(v));
    return worst;
}

double mass_in_ball(const RescaledFrame& frame, double radius) {
    if (!(radius > 0.0)) throw InvalidHorizon("mass_in_ball needs a positive radius");
    double mass = 0.0;
    for (const auto& rc : frame.curves) {
        for (std::size_t j = 0; j + 1 < rc.points.size(); ++j) {
            const Vec2 a = rc.points[j];
            const Vec2 d = rc.points[j + 1] - a;
            const double dd = d.norm2();
            if (dd == 0.0) continue;
            const double ad = a.dot(d);
            const double disc = ad * ad - dd * (a.norm2() - radius * radius);
            if (disc <= 0.0) continue;
            const double root = std::sqrt(disc);
            const double lo = std::max((-ad - root) / dd, 0.0);
            const double hi = std::min((-ad + root) / dd, 1.0);
            if (hi > lo) mass += std::sqrt(dd) * (hi - lo);
        }
    }
    return mass;
}

const char* BlowupClass::name() const {
    switch (kind) {
        case Kind::Line: return "Line";
        case Kind::Halfline: return "Halfline";
        case Kind::FlatTriod: return "FlatTriod";
        case Kind::Empty: return "Empty";
        case Kind::Unclassified: return "Unclassified";
    }
    return "Unknown";
}

namespace {

// Principal axis of the second-moment matrix about `origin`.
Vec2 principal_axis(const std::vector<Vec2>& pts, const Vec2& origin) {
    double a = 0.0, b = 0.0, c = 0.0;
    for (const Vec2& p : pts) {
        const Vec2 r = p - origin;
        a += r.x * r.x;
        b += r.x * r.y;
        c += r.y * r.y;
    }
    const double half_gap = 0.5 * (a - c);
    const double lambda = 0.5 * (a + c) + std::hypot(half_gap, b);
    Vec2 v{b, lambda - a};
    if (v.norm() < 1e-30) v = std::abs(lambda - c) > std::abs(lambda - a) ? Vec2{lambda - c, b}
                                                                          : Vec2{1.0, 0.0};
    if (v.norm() < 1e-30) v = {1.0, 0.0};
    return v.normalized();
}

struct AxisFit {
    Vec2 direction;
    double rms = 0.0;
    double proj_min = 0.0, proj_max = 0.0;
    double min_norm = 0.0;
};

AxisFit fit_axis(const std::vector<Vec2>& pts, const Vec2& origin) {
    AxisFit fit;
    fit.direction = principal_axis(pts, origin);
    double sum2 = 0.0, mean_proj = 0.0;
    fit.proj_min = std::numeric_limits<double>::max();
    fit.proj_max = -std::numeric_limits<double>::max();
    fit.min_norm = std::numeric_limits<double>::max();
    const Vec2 normal = fit.direction.perp();
    for (const Vec2& p : pts) {
        const Vec2 r = p - origin;
        sum2 += r.dot(normal) * r.dot(normal);
        const double t = r.dot(fit.direction);
        mean_proj += t;
        fit.proj_min = std::min(fit.proj_min, t);
        fit.proj_max = std::max(fit.proj_max, t);
        fit.min_norm = std::min(fit.min_norm, r.norm());
    }
    fit.rms = std::sqrt(sum2 / static_cast<double>(pts.size()));
    if (mean_proj < 0.0) {
        fit.direction = -fit.direction;
        std::swap(fit.proj_min, fit.proj_max);
        fit.proj_min = -fit.proj_min;
        fit.proj_max = -fit.proj_max;
    }
    return fit;
}

} // namespace

BlowupClass classify_blowup(const RescaledFrame& frame, double window_radius,
                            const ClassifyThresholds& th) {
    BlowupClass out;
    out.density_estimate = rescaled_density(frame);

    std::vector<Vec2> windowed;
    for (const auto& rc : frame.curves)
        for (const Vec2& p : rc.points)
            if (p.norm() <= window_radius) windowed.push_back(p);
    if (windowed.empty()) {
        out.kind = BlowupClass::Kind::Empty;
        return out;
    }

    const Vec2 origin{0.0, 0.0};
    const double reach = 0.25 * window_radius;

    // Line through the origin, populated on both rays, multiplicity one.
    {
        const AxisFit fit = fit_axis(windowed, origin);
        if (fit.rms <= th.eps_fit && fit.proj_min <= -reach && fit.proj_max >= reach &&
            mass_in_ball(frame, window_radius) <= 1.2 * 2.0 * window_radius) {
            out.direction = fit.direction;
            out.fit_residual = fit.rms;
            out.kind = std::abs(out.density_estimate - 1.0) <= th.eps_theta
                           ? BlowupClass::Kind::Line
                           : BlowupClass::Kind::Unclassified;
            return out;
        }
    }

    // Halfline from the origin.
    {
        const AxisFit fit = fit_axis(windowed, origin);
        if (fit.rms <= th.eps_fit && fit.proj_min >= -3.0 * th.eps_fit &&
            fit.min_norm <= 3.0 * th.eps_fit && fit.proj_max >= reach) {
            out.direction = fit.direction;
            out.fit_residual = fit.rms;
            out.kind = std::abs(out.density_estimate - 0.5) <= th.eps_theta
                           ? BlowupClass::Kind::Halfline
                           : BlowupClass::Kind::Unclassified;
            return out;
        }
    }

    // Flat triod: junction near the origin, three rays at mutual 120 degrees.
    if (frame.curves.size() == 3) {
        bool shared = true;
        const Vec2 j0 = frame.curves[0].points.front();
        for (const auto& rc : frame.curves)
            if (dist(rc.points.front(), j0) > 1e-9 * std::max(1.0, window_radius)) shared = false;
        if (shared && j0.norm() <= th.eps_fit) {
            std::array<AxisFit, 3> fits;
            bool rays_ok = true;
            double worst_rms = 0.0;
            for (int i = 0; i < 3 && rays_ok; ++i) {
                std::vector<Vec2> pts;
                for (const Vec2& p : frame.curves[i].points)
                    if (p.norm() <= window_radius) pts.push_back(p);
                if (pts.size() < 2) { rays_ok = false; break; }
                fits[i] = fit_axis(pts, j0);
                worst_rms = std::max(worst_rms, fits[i].rms);
                if (fits[i].rms > th.eps_fit || fits[i].proj_max < reach) rays_ok = false;
            }
            if (rays_ok) {
                for (int i = 0; i < 3; ++i) {
                    const double cosang = std::clamp(
                        fits[i].direction.dot(fits[(i + 1) % 3].direction), -1.0, 1.0);
                    if (std::abs(std::acos(cosang) - 2.0 * M_PI / 3.0) > th.eps_angle)
                        rays_ok = false;
                }
            }
            if (rays_ok) {
                out.direction = fits[0].direction;
                out.fit_residual = worst_rms;
                out.kind = std::abs(out.density_estimate - 1.5) <= th.eps_theta
                               ? BlowupClass::Kind::FlatTriod
                               : BlowupClass::Kind::Unclassified;
                return out;
            }
        }
    }

    out.kind = BlowupClass::Kind::Unclassified;
    return out;
}

double rescaled_curvature_residual(const RescaledFrame& before, const RescaledFrame& after) {
    if (before.curves.size() != after.curves.size())
        throw TopologyMismatch("frames have different curve counts");
    const double dfrak = after.frak_t - before.frak_t;
    if (!(dfrak > 0.0)) throw InvalidHorizon("frames must be in increasing rescaled time");

    double residual = 0.0;
    for (std::size_t i = 0; i < before.curves.size(); ++i) {
        const RescaledCurve& cb = before.curves[i];
        const RescaledCurve& ca = after.curves[i];
        if (cb.points.size() != ca.points.size())
            throw TopologyMismatch("frames have different node topology");
        const CurveGeometry gb = differentiate(as_curve(cb));
        const CurveGeometry ga = differentiate(as_curve(ca));
        const auto ksb = arclength_derivative(cb.k_tilde, gb);
        const auto ksa = arclength_derivative(ca.k_tilde, ga);
        const auto kssb = arclength_second_derivative(cb.k_tilde, gb);
        const auto kssa = arclength_second_derivative(ca.k_tilde, ga);
        // Nodes 1 and n-1 are skipped for the same reason as in the
        // unrescaled residual: the one-sided end estimate of k leaks into
        // their k_ss stencil.
        const int n = static_cast<int>(cb.points.size()) - 1;
        for (int j = 2; j <= n - 2; ++j) {
            const double k_m = 0.5 * (cb.k_tilde[j] + ca.k_tilde[j]);
            const double l_m = 0.5 * (cb.lambda_tilde[j] + ca.lambda_tilde[j]);
            const double ks_m = 0.5 * (ksb[j] + ksa[j]);
            const double kss_m = 0.5 * (kssb[j] + kssa[j]);
            const double k_dot = (ca.k_tilde[j] - cb.k_tilde[j]) / dfrak;
            residual = std::max(
                residual, std::abs(k_dot - (kss_m + ks_m * l_m + k_m * k_m * k_m - k_m)));
        }
    }
    return residual;
}

} // namespace triodflow
