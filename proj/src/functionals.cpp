#include "triodflow/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "triodflow/errors.hpp"
#include "triodflow/intersect.hpp"

namespace triodflow {

Lengths lengths(const Triod& triod) {
    Lengths out;
    out.l1 = triod.curves[0].chord_length();
    out.l2 = triod.curves[1].chord_length();
    out.l3 = triod.curves[2].chord_length();
    out.total = out.l1 + out.l2 + out.l3;
    return out;
}

double curvature_l2(const Triod& triod) {
    double sum = 0.0;
    for (const auto& curve : triod.curves) {
        const CurveGeometry g = differentiate(curve);
        for (std::size_t j = 0; j < g.k.size(); ++j) sum += g.k[j] * g.k[j] * g.ds[j];
    }
    return sum;
}

double curvature_sup(const Triod& triod) {
    double sup = 0.0;
    for (const auto& curve : triod.curves) {
        const CurveGeometry g = differentiate(curve);
        for (double k : g.k) sup = std::max(sup, std::abs(k));
    }
    return sup;
}

namespace {

void check_horizon(double t, const KernelConfig& kernel) {
    if (!(kernel.T_hat > t))
        throw InvalidHorizon("kernel horizon T_hat must exceed the evaluation time");
}

double kernel_value(const Vec2& p, double t, const KernelConfig& kernel) {
    const double a = kernel.T_hat - t;
    return std::exp(-dist2(p, kernel.x0) / (4.0 * a)) / std::sqrt(4.0 * M_PI * a);
}

} // namespace

double gaussian_density(const std::vector<SampledCurve>& curves, double t,
                        const KernelConfig& kernel) {
    check_horizon(t, kernel);
    double theta = 0.0;
    for (const auto& curve : curves) {
        const CurveGeometry g = differentiate(curve);
        for (std::size_t j = 0; j < curve.points.size(); ++j)
            theta += kernel_value(curve.points[j], t, kernel) * g.ds[j];
    }
    return theta;
}

double gaussian_density(const FlowState& state, const KernelConfig& kernel) {
    std::vector<SampledCurve> curves(state.triod.curves.begin(), state.triod.curves.end());
    return gaussian_density(curves, state.t, kernel);
}

double boundary_term_rate(const FlowState& state, const KernelConfig& kernel) {
    check_horizon(state.t, kernel);
    const double a = kernel.T_hat - state.t;
    double rate = 0.0;
    for (int i = 0; i < 3; ++i) {
        const CurveGeometry g = differentiate(state.triod.curves[i]);
        const Vec2 endpoint = state.triod.curves[i].points.back();
        rate += ((endpoint - kernel.x0) / (2.0 * a)).dot(g.tau.back()) *
                kernel_value(endpoint, state.t, kernel);
    }
    return rate;
}

double boundary_term_bound(double d, double horizon) {
    if (d < 0.0 || !(horizon > 0.0))
        throw InvalidHorizon("boundary_term_bound needs d >= 0 and horizon > 0");
    const double z = d / std::sqrt(2.0 * horizon);
    return 0.5 * std::erfc(z * M_SQRT1_2);
}

double monotonicity_dissipation(const FlowState& state, const KernelConfig& kernel) {
    check_horizon(state.t, kernel);
    const double a = kernel.T_hat - state.t;
    double q = 0.0;
    for (const auto& curve : state.triod.curves) {
        const CurveGeometry g = differentiate(curve);
        for (std::size_t j = 0; j < curve.points.size(); ++j) {
            const double normal_part =
                g.k[j] + (curve.points[j] - kernel.x0).dot(g.nu[j]) / (2.0 * a);
            q += normal_part * normal_part * kernel_value(curve.points[j], state.t, kernel) *
                 g.ds[j];
        }
    }
    return q;
}

MonotonicityReport monotonicity_defect(const std::vector<MonitorRecord>& series,
                                       std::size_t probe_index) {
    if (series.size() < 3)
        throw InsufficientRecords("monotonicity_defect needs at least 3 records");
    const std::size_t m = series.size();
    for (const auto& rec : series)
        if (probe_index >= rec.theta.size())
            throw InvalidLocator("probe index out of range in monitor series");

    // b(t) = integral of the boundary rate from t to the horizon; the tail
    // beyond the last record is a constant that cancels in differences.
    std::vector<double> b(m, 0.0);
    for (std::size_t i = m - 1; i-- > 0;) {
        const double dt = series[i + 1].t - series[i].t;
        b[i] = b[i + 1] + 0.5 * dt *
                              (series[i].b_rate[probe_index] + series[i + 1].b_rate[probe_index]);
    }

    MonotonicityReport report;
    report.max_defect = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const double dt = series[i + 1].t - series[i].t;
        const double lhs = ((series[i + 1].theta[probe_index] + b[i + 1]) -
                            (series[i].theta[probe_index] + b[i])) /
                           dt;
        const double rhs =
            -0.5 * (series[i].mon_rhs[probe_index] + series[i + 1].mon_rhs[probe_index]);
        report.interval_lhs.push_back(lhs);
        report.interval_rhs.push_back(rhs);
        report.max_defect = std::max(report.max_defect, lhs);
    }
    return report;
}

namespace {

constexpr double kJunctionPhi = 6.928203230275509; // 4 sqrt(3)

double phi_of_pair(const Triod& triod, const NodeLocator& a, const NodeLocator& b) {
    const Vec2 p = triod.at(a);
    const Vec2 q = triod.at(b);
    const double d2 = dist2(p, q);
    const double area = enclosed_area(p, q, tree_geodesic(triod, a, b));
    if (area <= 1e-14 * d2) return std::numeric_limits<double>::infinity();
    return d2 / area;
}

} // namespace

double embeddedness_E(const Triod& triod, long pair_budget) {
    if (!self_intersections(triod).empty())
        throw NotEmbedded("embeddedness functional requires an embedded triod");

    double best = kJunctionPhi; // junction self-pair value, also the cap

    // The junction node appears once (as curve 0, node 0); nodes are
    // enumerated per curve starting at 1 for curves 1 and 2.
    auto first_node = [](int curve) { return curve == 0 ? 0 : 1; };
    for (int c1 = 0; c1 < 3; ++c1) {
        for (int c2 = c1; c2 < 3; ++c2) {
            const int n1 = triod.curves[c1].n();
            const int n2 = triod.curves[c2].n();
            // Count pairs in this stratum.
            long count = 0;
            if (c1 == c2) {
                const long nodes = n1 + 1 - first_node(c1);
                count = nodes * (nodes - 1) / 2;
            } else {
                count = static_cast<long>(n1 + 1 - first_node(c1)) * (n2 + 1 - first_node(c2));
            }
            long quota = pair_budget > 0 ? std::max<long>(1, pair_budget / 6) : 0;
            const long stride = quota > 0 ? std::max<long>(1, (count + quota - 1) / quota)
                                          : std::numeric_limits<long>::max();
            long index = 0;
            for (int i = first_node(c1); i <= n1; ++i) {
                const int j_begin = (c1 == c2) ? i + 1 : first_node(c2);
                for (int j = j_begin; j <= n2; ++j, ++index) {
                    if (index % stride != 0) continue;
                    const double phi = phi_of_pair(triod, {c1, i}, {c2, j});
                    best = std::min(best, phi);
                }
            }
        }
    }
    return best;
}

ReachableReport reachable_check(const std::vector<Snapshot>& snapshots, const Vec2& x,
                                double T_hat, double tol) {
    if (snapshots.empty()) throw InsufficientRecords("reachable_check needs records");
    const std::size_t m = snapshots.size();
    std::vector<double> d2(m);
    for (std::size_t i = 0; i < m; ++i) {
        double best = std::numeric_limits<double>::max();
        for (const auto& curve : snapshots[i].triod.curves)
            for (const Vec2& p : curve.points) best = std::min(best, dist2(p, x));
        d2[i] = best;
    }
    ReachableReport report;
    report.max_violation = -std::numeric_limits<double>::infinity();
    report.is_reachable_consistent = true;
    for (std::size_t i = 0; i < m; ++i) {
        if (d2[i] > 2.0 * (T_hat - snapshots[i].t) + tol)
            report.is_reachable_consistent = false;
        for (std::size_t j = i + 1; j < m; ++j) {
            const double violation = d2[i] - d2[j] - 2.0 * (snapshots[j].t - snapshots[i].t);
            report.max_violation = std::max(report.max_violation, violation);
        }
    }
    return report;
}

namespace {

struct CutCurve {
    double k2_integral = 0.0;
    double length = 0.0;
    double k_end = 0.0;
    double ks_end = 0.0;
    double lambda_end = 0.0;
};

CutCurve cut_at_circle(const SampledCurve& curve, const Vec2& center, double radius) {
    const CurveGeometry g = differentiate(curve);
    const auto ks = arclength_derivative(g.k, g);
    const auto& p = curve.points;

    int cross = -1;
    for (std::size_t j = 0; j + 1 < p.size(); ++j) {
        if (dist(p[j], center) < radius && dist(p[j + 1], center) >= radius) {
            cross = static_cast<int>(j);
            break;
        }
    }
    if (cross < 0)
        throw CutNotTransversal("curve does not cross the cut circle");
    const double r0 = dist(p[cross], center);
    const double r1 = dist(p[cross + 1], center);
    const double chord = dist(p[cross], p[cross + 1]);
    if (std::abs(r1 - r0) < 0.05 * chord)
        throw CutNotTransversal("curve meets the cut circle near tangentially");
    const double theta = (radius - r0) / (r1 - r0);

    CutCurve cut;
    for (int j = 0; j < cross; ++j) {
        const double w = dist(p[j], p[j + 1]);
        cut.k2_integral += 0.5 * (g.k[j] * g.k[j] + g.k[j + 1] * g.k[j + 1]) * w;
        cut.length += w;
    }
    const double k_q = g.k[cross] + theta * (g.k[cross + 1] - g.k[cross]);
    cut.k2_integral += 0.5 * (g.k[cross] * g.k[cross] + k_q * k_q) * theta * chord;
    cut.length += theta * chord;
    cut.k_end = k_q;
    cut.ks_end = ks[cross] + theta * (ks[cross + 1] - ks[cross]);
    cut.lambda_end = g.lambda[cross] + theta * (g.lambda[cross + 1] - g.lambda[cross]);
    return cut;
}

} // namespace

KkevolReport kkevol_bound_check(const std::vector<Snapshot>& snapshots, double cut_radius) {
    if (snapshots.size() < 2)
        throw InsufficientRecords("kkevol_bound_check needs at least 2 records");

    std::vector<double> k2(snapshots.size()), len_min(snapshots.size()),
        boundary(snapshots.size());
    for (std::size_t m = 0; m < snapshots.size(); ++m) {
        const Vec2 center = snapshots[m].triod.junction();
        double total = 0.0, lmin = std::numeric_limits<double>::max(), bsum = 0.0;
        for (const auto& curve : snapshots[m].triod.curves) {
            const CutCurve cut = cut_at_circle(curve, center, cut_radius);
            total += cut.k2_integral;
            lmin = std::min(lmin, cut.length);
            bsum += 2.0 * cut.k_end * (cut.ks_end + cut.lambda_end * cut.k_end);
        }
        k2[m] = total;
        len_min[m] = lmin;
        boundary[m] = bsum;
    }

    KkevolReport report;
    std::vector<double> a_term, b_term, d_term;
    for (std::size_t m = 0; m + 1 < snapshots.size(); ++m) {
        const double dt = snapshots[m + 1].t - snapshots[m].t;
        const double lhs = (k2[m + 1] - k2[m]) / dt;
        const double kk = 0.5 * (k2[m] + k2[m + 1]);
        const double lmin = 0.5 * (len_min[m] + len_min[m + 1]);
        report.t.push_back(0.5 * (snapshots[m].t + snapshots[m + 1].t));
        report.lhs.push_back(lhs);
        a_term.push_back(kk * kk * kk);
        b_term.push_back(kk * kk / lmin);
        d_term.push_back(0.5 * (boundary[m] + boundary[m + 1]));
    }
    double c = 0.0;
    for (std::size_t m = 0; m < report.lhs.size(); ++m) {
        const double denom = a_term[m] + b_term[m];
        if (denom > 0.0) c = std::max(c, (report.lhs[m] - d_term[m]) / denom);
    }
    c = std::max(c, 0.0);
    report.c1 = report.c2 = c;
    for (std::size_t m = 0; m < report.lhs.size(); ++m) {
        const double rhs = c * a_term[m] + c * b_term[m] + d_term[m];
        report.rhs.push_back(rhs);
        report.defect.push_back(report.lhs[m] - rhs);
    }
    return report;
}

MonitorRecord make_monitor_record(const FlowState& state,
                                  const std::vector<KernelConfig>& probes,
                                  long e_pair_budget) {
    MonitorRecord rec;
    rec.t = state.t;
    rec.lengths = lengths(state.triod);
    rec.k2_int = curvature_l2(state.triod);
    rec.k_sup = curvature_sup(state.triod);
    rec.junction = state.triod.junction();
    rec.residuals = junction_residuals(state);
    rec.theta.reserve(probes.size());
    for (const auto& kernel : probes) {
        rec.theta.push_back(gaussian_density(state, kernel));
        rec.b_rate.push_back(boundary_term_rate(state, kernel));
        rec.mon_rhs.push_back(monotonicity_dissipation(state, kernel));
    }
    rec.embeddedness = embeddedness_E(state.triod, e_pair_budget);
    return rec;
}

} // namespace triodflow
