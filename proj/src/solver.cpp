#include "triodflow/solver.hpp"

#include <algorithm>
#include <cmath>

#include "triodflow/errors.hpp"

namespace triodflow {

void SolverConfig::validate() const {
    if (!(cfl > 0.0 && cfl <= 1.0)) throw ConfigError("cfl must be in (0,1]");
    if (n_nodes < 8) throw ConfigError("n_nodes must be at least 8");
    if (resample_every < 1) throw ConfigError("resample_every must be >= 1");
    if (!(t_max > 0.0)) throw ConfigError("t_max must be positive");
    if (!(eps_collapse > 0.0)) throw ConfigError("eps_collapse must be positive");
    if (!(k2_blow > 0.0)) throw ConfigError("k2_blow must be positive");
    if (!(eps_steady > 0.0)) throw ConfigError("eps_steady must be positive");
    if (!(semi_implicit_dt_factor > 0.0 && semi_implicit_dt_factor <= 10.0))
        throw ConfigError("semi_implicit_dt_factor must be in (0,10]");
    if (!(tol_angle > 0.0)) throw ConfigError("tol_angle must be positive");
}

const char* StopReason::name() const {
    switch (kind) {
        case Kind::TimeMax: return "TimeMax";
        case Kind::LengthCollapse: return "LengthCollapse";
        case Kind::CurvatureBlowup: return "CurvatureBlowup";
        case Kind::SteadyState: return "SteadyState";
    }
    return "Unknown";
}

double stable_dt(const FlowState& state, const SolverConfig& config) {
    const double h = state.triod.min_chord();
    const double floor = 1e-12 * state.triod.domain.scale();
    if (!(h > floor)) throw DegenerateSegment("min chord too small for a stable step");
    return config.cfl * h * h;
}

namespace {

// The one-sided tangent at the junction is proportional to a_i - O with
// anchor a_i = (4 p1 - p2) / 3, so the tangent balance is the Fermat-point
// condition for the three anchors.
std::array<Vec2, 3> junction_anchors(const Triod& triod) {
    std::array<Vec2, 3> anchors;
    for (int i = 0; i < 3; ++i) {
        const auto& p = triod.curves[i].points;
        anchors[i] = (p[1] * 4.0 - p[2]) / 3.0;
    }
    return anchors;
}

Vec2 tangent_balance(const std::array<Vec2, 3>& anchors, const Vec2& O) {
    Vec2 r{0.0, 0.0};
    for (const Vec2& a : anchors) r += (a - O).normalized();
    return r;
}

Vec2 solve_junction(const std::array<Vec2, 3>& anchors, Vec2 O, double tol,
                    int max_iters, int* iters_out) {
    Vec2 residual = tangent_balance(anchors, O);
    int it = 0;
    for (; it < max_iters && residual.norm() > tol; ++it) {
        // J = sum (tau tau^T - I)/d, negative definite away from collinearity.
        double j00 = 0.0, j01 = 0.0, j11 = 0.0;
        for (const Vec2& a : anchors) {
            const Vec2 r = a - O;
            const double d = r.norm();
            if (!(d > 0.0)) throw JunctionSolveFailed("junction collided with an anchor");
            const Vec2 tau = r / d;
            j00 += (tau.x * tau.x - 1.0) / d;
            j01 += (tau.x * tau.y) / d;
            j11 += (tau.y * tau.y - 1.0) / d;
        }
        const double det = j00 * j11 - j01 * j01;
        if (std::abs(det) < 1e-300)
            throw JunctionSolveFailed("singular junction Jacobian");
        const Vec2 delta{(-residual.x * j11 + residual.y * j01) / det,
                         (residual.x * j01 - residual.y * j00) / det};
        double alpha = 1.0;
        Vec2 next = O + delta;
        Vec2 next_res = tangent_balance(anchors, next);
        while (next_res.norm() >= residual.norm() && alpha > 1e-6) {
            alpha *= 0.5;
            next = O + delta * alpha;
            next_res = tangent_balance(anchors, next);
        }
        if (next_res.norm() >= residual.norm())
            break; // no descent direction left
        O = next;
        residual = next_res;
    }
    if (iters_out) *iters_out = it;
    if (residual.norm() > tol)
        throw JunctionSolveFailed("junction residual " + std::to_string(residual.norm()) +
                                  " above tolerance after " + std::to_string(it) + " iterations");
    return O;
}

// Thomas algorithm for the semi-implicit interior solve, one coordinate at
// a time. mu_j = dt / (h |gamma_x|_j)^2 with boundary values fixed.
void semi_implicit_curve(SampledCurve& curve, const CurveGeometry& geom, double dt,
                         const Vec2& left, const Vec2& right) {
    const int n = curve.n();
    const double h = 1.0 / n;
    const int m = n - 1; // unknowns 1..n-1
    std::vector<double> a(m), b(m), c(m);
    std::vector<Vec2> rhs(m);
    for (int j = 1; j <= n - 1; ++j) {
        const double g = geom.gamma_x_norm[j];
        const double mu = dt / (h * h * g * g);
        a[j - 1] = -mu;
        b[j - 1] = 1.0 + 2.0 * mu;
        c[j - 1] = -mu;
        rhs[j - 1] = curve.points[j];
    }
    rhs[0] -= a[0] * left;
    rhs[m - 1] -= c[m - 1] * right;
    for (int i = 1; i < m; ++i) {
        const double w = a[i] / b[i - 1];
        b[i] -= w * c[i - 1];
        rhs[i] -= rhs[i - 1] * w;
    }
    std::vector<Vec2> sol(m);
    sol[m - 1] = rhs[m - 1] / b[m - 1];
    for (int i = m - 2; i >= 0; --i)
        sol[i] = (rhs[i] - c[i] * sol[i + 1]) / b[i];
    for (int j = 1; j <= n - 1; ++j) curve.points[j] = sol[j - 1];
    curve.points[0] = left;
    curve.points[n] = right;
}

} // namespace

int enforce_junction(Triod& triod, double tol_angle, int max_iters) {
    const auto anchors = junction_anchors(triod);
    int iters = 0;
    const Vec2 O = solve_junction(anchors, triod.junction(), tol_angle, max_iters, &iters);
    for (auto& curve : triod.curves) curve.points[0] = O;
    return iters;
}

FlowState step(const FlowState& state, double dt, const SolverConfig& config) {
    FlowState next = state;
    Triod& triod = next.triod;
    const Vec2 old_junction = triod.junction();

    for (int i = 0; i < 3; ++i) {
        SampledCurve& curve = triod.curves[i];
        const CurveGeometry geom = differentiate(curve);
        if (config.scheme == Scheme::Explicit) {
            for (int j = 1; j < curve.n(); ++j)
                curve.points[j] += geom.v[j] * dt;
            curve.points[curve.n()] = triod.endpoints[i];
        } else {
            semi_implicit_curve(curve, geom, dt, old_junction, triod.endpoints[i]);
        }
    }
    enforce_junction(triod, config.tol_angle, config.junction_max_iters);

    // Convexity should keep everything inside; count any projection.
    const double offset = 1e-9 * triod.domain.scale();
    for (auto& curve : triod.curves) {
        for (int j = 0; j < curve.n(); ++j) {
            if (!triod.domain.contains(curve.points[j])) {
                curve.points[j] = triod.domain.pull_inside(curve.points[j], offset);
                ++next.projection_count;
            }
        }
    }
    // A projected junction must stay concurrent.
    triod.curves[1].points[0] = triod.curves[0].points[0];
    triod.curves[2].points[0] = triod.curves[0].points[0];

    double max_disp = 0.0;
    for (int i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < triod.curves[i].points.size(); ++j)
            max_disp = std::max(max_disp,
                                dist(triod.curves[i].points[j], state.triod.curves[i].points[j]));

    for (const auto& curve : triod.curves) curve.validate();

    next.t = state.t + dt;
    next.step_index = state.step_index + 1;
    next.dt_last = dt;
    next.max_speed_last = max_disp / dt;
    return next;
}

JunctionResiduals junction_residuals(const FlowState& state) {
    const Triod& triod = state.triod;
    JunctionResiduals r;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            r.concurrency = std::max(
                r.concurrency, dist(triod.curves[i].points[0], triod.curves[j].points[0]));

    Vec2 tangent_sum{0.0, 0.0};
    std::array<double, 3> k0{}, lambda0{}, flux{};
    for (int i = 0; i < 3; ++i) {
        const CurveGeometry geom = differentiate(triod.curves[i]);
        tangent_sum += geom.tau[0];
        k0[i] = geom.k[0];
        lambda0[i] = geom.lambda[0];
        const auto ks = arclength_derivative(geom.k, geom);
        flux[i] = ks[0] + geom.lambda[0] * geom.k[0];
    }
    r.angle = tangent_sum.norm();
    r.sum_k = std::abs(k0[0] + k0[1] + k0[2]);
    r.sum_lambda = std::abs(lambda0[0] + lambda0[1] + lambda0[2]);
    for (int i = 0; i < 3; ++i) {
        for (int j = i + 1; j < 3; ++j)
            r.flux_spread = std::max(r.flux_spread, std::abs(flux[i] - flux[j]));
        const double expect = (k0[(i + 2) % 3] - k0[(i + 1) % 3]) / std::sqrt(3.0);
        r.lambda_identity = std::max(r.lambda_identity, std::abs(lambda0[i] - expect));
    }
    return r;
}

namespace {

void require_same_topology(const FlowState& a, const FlowState& b) {
    for (int i = 0; i < 3; ++i)
        if (a.triod.curves[i].points.size() != b.triod.curves[i].points.size())
            throw TopologyMismatch("states have different node topology");
}

} // namespace

PdeResiduals pde_residual_check(const FlowState& before, const FlowState& after, double dt) {
    require_same_topology(before, after);
    PdeResiduals res;
    for (int i = 0; i < 3; ++i) {
        const CurveGeometry gb = differentiate(before.triod.curves[i]);
        const CurveGeometry ga = differentiate(after.triod.curves[i]);
        const int n = before.triod.curves[i].n();

        const auto ksb = arclength_derivative(gb.k, gb);
        const auto ksa = arclength_derivative(ga.k, ga);
        const auto kssb = arclength_second_derivative(gb.k, gb);
        const auto kssa = arclength_second_derivative(ga.k, ga);
        const auto lsb = arclength_derivative(gb.lambda, gb);
        const auto lsa = arclength_derivative(ga.lambda, ga);
        const auto lssb = arclength_second_derivative(gb.lambda, gb);
        const auto lssa = arclength_second_derivative(ga.lambda, ga);

        // Nodes 1 and n-1 are skipped: their k_ss stencil mixes the
        // one-sided end estimate of k with interior ones, which the 1/h^2
        // amplifies into a non-converging artifact of the estimator.
        for (int j = 2; j <= n - 2; ++j) {
            const double k_m = 0.5 * (gb.k[j] + ga.k[j]);
            const double l_m = 0.5 * (gb.lambda[j] + ga.lambda[j]);
            const double ks_m = 0.5 * (ksb[j] + ksa[j]);
            const double kss_m = 0.5 * (kssb[j] + kssa[j]);
            const double ls_m = 0.5 * (lsb[j] + lsa[j]);
            const double lss_m = 0.5 * (lssb[j] + lssa[j]);

            const double k_dot = (ga.k[j] - gb.k[j]) / dt;
            res.res_k = std::max(res.res_k,
                                 std::abs(k_dot - (kss_m + ks_m * l_m + k_m * k_m * k_m)));

            const double l_dot = (ga.lambda[j] - gb.lambda[j]) / dt;
            res.res_lambda = std::max(
                res.res_lambda,
                std::abs(l_dot - (lss_m - l_m * ls_m - 2.0 * k_m * ks_m + l_m * k_m * k_m)));

            const Vec2 nu_m = (gb.nu[j] + ga.nu[j]).normalized();
            const Vec2 tau_dot = (ga.tau[j] - gb.tau[j]) / dt;
            res.res_tau = std::max(res.res_tau,
                                   (tau_dot - nu_m * (ks_m + k_m * l_m)).norm());
        }
    }
    return res;
}

double commutation_defect(const FlowState& before, const FlowState& after, double dt) {
    require_same_topology(before, after);
    double defect = 0.0;
    for (int i = 0; i < 3; ++i) {
        const CurveGeometry gb = differentiate(before.triod.curves[i]);
        const CurveGeometry ga = differentiate(after.triod.curves[i]);
        const int n = before.triod.curves[i].n();
        const double h = 1.0 / n;

        const auto fsb = arclength_derivative(gb.k, gb);
        const auto fsa = arclength_derivative(ga.k, ga);
        std::vector<double> f_dot(n + 1);
        for (int j = 0; j <= n; ++j) f_dot[j] = (ga.k[j] - gb.k[j]) / dt;
        const auto lsb = arclength_derivative(gb.lambda, gb);
        const auto lsa = arclength_derivative(ga.lambda, ga);

        for (int j = 2; j <= n - 2; ++j) {
            const double g_m = 0.5 * (gb.gamma_x_norm[j] + ga.gamma_x_norm[j]);
            const double dt_ds_f = (fsa[j] - fsb[j]) / dt;
            const double ds_dt_f = (f_dot[j + 1] - f_dot[j - 1]) / (2.0 * h) / g_m;
            const double k_m = 0.5 * (gb.k[j] + ga.k[j]);
            const double ls_m = 0.5 * (lsb[j] + lsa[j]);
            const double fs_m = 0.5 * (fsb[j] + fsa[j]);
            defect = std::max(defect,
                              std::abs(dt_ds_f - ds_dt_f - (k_m * k_m - ls_m) * fs_m));
        }
    }
    return defect;
}

} // namespace triodflow
