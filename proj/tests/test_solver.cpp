#include <doctest.h>

#include <cmath>

#include "triodflow/errors.hpp"
#include "triodflow/intersect.hpp"
#include "triodflow/run.hpp"
#include "triodflow/scenario.hpp"
#include "triodflow/steiner.hpp"

using namespace triodflow;

namespace {

ScenarioConfig preset(const std::string& name) {
    auto config = preset_scenario(name);
    REQUIRE_MESSAGE(config.has_value(), "missing preset " << name);
    return *config;
}

FlowState state_of(const Triod& triod) {
    FlowState state;
    state.triod = triod;
    return state;
}

Triod exact_steiner_triod(std::size_t n) {
    ScenarioConfig config = preset("equilateral");
    config.solver.n_nodes = n;
    return build_initial_triod(config);
}

Triod perturbed_triod(std::size_t n, double amplitude = 0.1, bool symmetric = false) {
    ScenarioConfig config = preset(symmetric ? "symmetric3" : "perturbed");
    config.solver.n_nodes = n;
    config.initial.amplitude = amplitude;
    return build_initial_triod(config);
}

} // namespace

TEST_CASE("stable_dt follows cfl * min_chord^2") {
    SolverConfig config;
    config.cfl = 0.25;
    FlowState state = state_of(exact_steiner_triod(64));
    const double h = state.triod.min_chord();
    CHECK(stable_dt(state, config) == doctest::Approx(0.25 * h * h).epsilon(1e-12));

    // Halving the chord quarters the step.
    FlowState fine = state_of(exact_steiner_triod(128));
    CHECK(stable_dt(fine, config) ==
          doctest::Approx(0.25 * 0.25 * h * h).epsilon(1e-2));

    config.cfl = 0.5;
    SampledCurve tight = make_segment({0.0, 0.0}, {1e-3 * 16, 0.0}, 16);
    FlowState mixed = state_of(exact_steiner_triod(64));
    mixed.triod.curves[0] = tight; // min chord 1e-3
    CHECK(stable_dt(mixed, config) == doctest::Approx(5e-7).epsilon(1e-12));
}

TEST_CASE("step: exact Steiner triod is stationary under both schemes") {
    for (Scheme scheme : {Scheme::Explicit, Scheme::SemiImplicit}) {
        SolverConfig config;
        config.scheme = scheme;
        config.n_nodes = 64;
        FlowState state = state_of(exact_steiner_triod(64));
        const Triod before = state.triod;
        const double dt = (scheme == Scheme::SemiImplicit ? 10.0 : 1.0) *
                          stable_dt(state, config);
        const FlowState after = step(state, dt, config);
        double max_disp = 0.0;
        for (int i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < before.curves[i].points.size(); ++j)
                max_disp = std::max(max_disp, dist(before.curves[i].points[j],
                                                   after.triod.curves[i].points[j]));
        CHECK(max_disp <= 1e-12);
    }
}

TEST_CASE("step: 3-fold symmetric perturbation pins the junction") {
    SolverConfig config;
    config.n_nodes = 32;
    config.t_max = 0.5;
    FlowState state = state_of(perturbed_triod(32, 0.05, true));
    const Vec2 center = state.triod.junction();
    CHECK(center.norm() <= 1e-12);
    for (int s = 0; s < 200; ++s) {
        const double dt = 10.0 * stable_dt(state, config);
        state = step(state, dt, config);
        CHECK(state.triod.junction().norm() <= 1e-10);
    }
}

TEST_CASE("step: one step dissipates length at rate integral k^2 ds") {
    SolverConfig config;
    config.scheme = Scheme::Explicit;
    config.n_nodes = 128;
    FlowState state = state_of(perturbed_triod(128));
    // Let the initial junction-compatibility transient relax first.
    while (state.t < 0.01) state = step(state, stable_dt(state, config), config);
    const double dt = stable_dt(state, config);
    const double l_before = state.triod.total_length();
    const double k2 = curvature_l2(state.triod);
    const FlowState after = step(state, dt, config);
    const double drop = l_before - after.triod.total_length();
    CHECK(drop > 0.0);
    CHECK(std::abs(drop - dt * k2) <= 0.02 * dt * k2);
}

TEST_CASE("step: length is monotone along semi-implicit steps") {
    SolverConfig config;
    config.n_nodes = 64;
    FlowState state = state_of(perturbed_triod(64));
    double prev = state.triod.total_length();
    for (int s = 0; s < 100; ++s) {
        state = step(state, 10.0 * stable_dt(state, config), config);
        const double cur = state.triod.total_length();
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
}

TEST_CASE("junction_residuals: exact Steiner triod vanishes") {
    const FlowState state = state_of(exact_steiner_triod(64));
    const JunctionResiduals r = junction_residuals(state);
    CHECK(r.concurrency <= 1e-12);
    CHECK(r.angle <= 1e-12);
    CHECK(r.sum_k <= 1e-9);
    CHECK(r.sum_lambda <= 1e-9);
    CHECK(r.flux_spread <= 1e-7);
    CHECK(r.lambda_identity <= 1e-9);
}

TEST_CASE("junction_residuals: enforced after every accepted step") {
    SolverConfig config;
    config.n_nodes = 48;
    FlowState state = state_of(perturbed_triod(48));
    for (int s = 0; s < 50; ++s) {
        state = step(state, 10.0 * stable_dt(state, config), config);
        const JunctionResiduals r = junction_residuals(state);
        CHECK(r.concurrency <= 1e-12);
        CHECK(r.angle <= 1e-8);
    }
}

TEST_CASE("junction_residuals: sums halve under grid refinement") {
    // Same smooth analytic initial data at N and 2N; the signed junction
    // sums cross zero in time, so compare maxima over a window.
    auto residual_at = [](std::size_t n) {
        SolverConfig config;
        config.scheme = Scheme::Explicit;
        config.n_nodes = n;
        FlowState state = state_of(perturbed_triod(n, 0.08));
        JunctionResiduals worst;
        int samples = 0;
        while (state.t < 0.03) {
            state = step(state, stable_dt(state, config), config);
            if (state.t >= 0.01 && ++samples % 20 == 0) {
                const JunctionResiduals r = junction_residuals(state);
                worst.sum_k = std::max(worst.sum_k, r.sum_k);
                worst.sum_lambda = std::max(worst.sum_lambda, r.sum_lambda);
                worst.lambda_identity = std::max(worst.lambda_identity, r.lambda_identity);
            }
        }
        return worst;
    };
    const JunctionResiduals coarse = residual_at(64);
    const JunctionResiduals fine = residual_at(128);
    CHECK(fine.sum_k <= 0.75 * coarse.sum_k + 1e-10);
    CHECK(fine.sum_lambda <= 0.75 * coarse.sum_lambda + 1e-10);
    CHECK(fine.lambda_identity <= 0.75 * coarse.lambda_identity + 1e-10);
}

TEST_CASE("pde_residual_check: stationary state has zero residuals") {
    SolverConfig config;
    config.scheme = Scheme::Explicit;
    config.n_nodes = 64;
    FlowState state = state_of(exact_steiner_triod(64));
    const double dt = stable_dt(state, config);
    const FlowState after = step(state, dt, config);
    const PdeResiduals res = pde_residual_check(state, after, dt);
    CHECK(res.res_k <= 1e-7);
    CHECK(res.res_lambda <= 1e-7);
    CHECK(res.res_tau <= 1e-7);
}

TEST_CASE("pde_residual_check: residuals shrink >= 3x under (N, dt) refinement") {
    auto residual_at = [](std::size_t n, int dt_div) {
        SolverConfig config;
        config.scheme = Scheme::Explicit;
        config.n_nodes = n;
        FlowState state = state_of(perturbed_triod(n, 0.05, true));
        double dt = stable_dt(state, config) / dt_div;
        const double t_star = 0.02;
        while (state.t < t_star) state = step(state, std::min(dt, t_star - state.t), config);
        const FlowState after = step(state, dt, config);
        return pde_residual_check(state, after, dt);
    };
    const PdeResiduals coarse = residual_at(64, 1);
    const PdeResiduals fine = residual_at(128, 4);
    CHECK(fine.res_k <= coarse.res_k / 3.0);
    CHECK(fine.res_lambda <= coarse.res_lambda / 3.0);
    CHECK(fine.res_tau <= coarse.res_tau / 3.0);
}

TEST_CASE("commutation rule mismatch shrinks under refinement") {
    auto defect_at = [](std::size_t n) {
        SolverConfig config;
        config.scheme = Scheme::Explicit;
        config.n_nodes = n;
        FlowState state = state_of(perturbed_triod(n, 0.05, true));
        const double t_star = 0.02;
        while (state.t < t_star)
            state = step(state, std::min(stable_dt(state, config), t_star - state.t), config);
        const double dt = stable_dt(state, config);
        const FlowState after = step(state, dt, config);
        return commutation_defect(state, after, dt);
    };
    const double coarse = defect_at(64);
    const double fine = defect_at(128);
    CHECK(fine <= coarse / 3.0);
}

TEST_CASE("pde_residual_check: topology mismatch rejected") {
    const FlowState a = state_of(exact_steiner_triod(32));
    const FlowState b = state_of(exact_steiner_triod(64));
    CHECK_THROWS_AS(pde_residual_check(a, b, 1e-4), TopologyMismatch);
}

TEST_CASE("run: stationary input reaches SteadyState within 2 steps") {
    ScenarioConfig config = preset("equilateral");
    config.solver.n_nodes = 32;
    const RunResult result = run(build_initial_triod(config), config.solver, config.probes,
                                 config.monitor);
    CHECK(result.reason.kind == StopReason::Kind::SteadyState);
    CHECK(result.final_state.step_index <= 2);
}

TEST_CASE("run: obtuse endpoints collapse the curve to the wide vertex") {
    ScenarioConfig config = preset("obtuse150");
    config.solver.n_nodes = 48;
    config.probes.clear(); // probe horizons are tuned for the full preset
    const Triod initial = build_initial_triod(config);
    const RunResult result = run(initial, config.solver, config.probes, config.monitor);
    REQUIRE(result.reason.kind == StopReason::Kind::LengthCollapse);
    CHECK(result.final_state.triod.min_curve_length() < config.solver.eps_collapse);
    // The collapsing curve is the one anchored at the 150 degree vertex.
    const Vec2 wide{std::cos(100.0 * M_PI / 180.0), std::sin(100.0 * M_PI / 180.0)};
    CHECK(dist(result.final_state.triod.endpoints[result.reason.curve], wide) <= 1e-12);
    // And the junction has been dragged next to it.
    CHECK(dist(result.final_state.triod.junction(), wide) <= 0.05);
}

TEST_CASE("run: perturbed start converges to the Steiner triod") {
    ScenarioConfig config = preset("perturbed");
    config.solver.n_nodes = 32;
    config.probes.clear();
    const RunResult result = run(build_initial_triod(config), config.solver, config.probes,
                                 config.monitor);
    REQUIRE(result.reason.kind == StopReason::Kind::SteadyState);
    const SteinerSolution oracle =
        fermat_point(config.endpoints[0], config.endpoints[1], config.endpoints[2]);
    const SteinerComparison cmp = compare_to_steiner(result.final_state.triod, oracle);
    CHECK(cmp.junction_dist <= 5e-3);
    CHECK(cmp.length_gap >= -1e-9);
    CHECK(cmp.length_gap <= 5e-3);
    CHECK(cmp.hausdorff <= 5e-3);

    // Embeddedness holds at every recorded state.
    for (const auto& snap : result.snapshots)
        CHECK(self_intersections(snap.triod).empty());
    // Convex confinement: no projections were needed.
    CHECK(result.final_state.projection_count == 0);
}

TEST_CASE("explicit stability threshold sits well above the default cfl") {
    auto stable_at = [](double cfl) {
        ScenarioConfig config = preset("perturbed");
        config.solver.n_nodes = 48;
        config.solver.scheme = Scheme::Explicit;
        config.solver.cfl = cfl;
        config.solver.t_max = 0.02;
        config.solver.k2_blow = 1e4;
        config.probes.clear();
        try {
            const RunResult result = run(build_initial_triod(config), config.solver,
                                         config.probes, config.monitor);
            return result.reason.kind == StopReason::Kind::TimeMax ||
                   result.reason.kind == StopReason::Kind::SteadyState;
        } catch (const RunAborted&) {
            return false;
        }
    };
    CHECK(stable_at(0.25));
    CHECK(stable_at(0.40));
    CHECK_FALSE(stable_at(0.75));

    // Bisect the blow-up threshold; the default 0.25 keeps a 1.5x margin.
    double lo = 0.40, hi = 0.75;
    for (int i = 0; i < 4; ++i) {
        const double mid = 0.5 * (lo + hi);
        (stable_at(mid) ? lo : hi) = mid;
    }
    CHECK(lo >= 1.5 * 0.25);
}

TEST_CASE("solver config validation") {
    SolverConfig config;
    config.cfl = 0.0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
    config.cfl = 0.25;
    config.t_max = -1.0;
    CHECK_THROWS_AS(config.validate(), ConfigError);
}
