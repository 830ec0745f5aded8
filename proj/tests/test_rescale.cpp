#include <doctest.h>

#include <cmath>
#include <random>

#include "triodflow/errors.hpp"
#include "triodflow/rescale.hpp"
#include "triodflow/run.hpp"
#include "triodflow/scenario.hpp"

using namespace triodflow;

namespace {

Triod flat_steiner_triod(std::size_t n, double radius = 1.0) {
    Triod triod;
    triod.domain = DomainShape::disc({0.0, 0.0}, radius);
    for (int i = 0; i < 3; ++i) {
        const double a = M_PI / 2.0 + i * 2.0 * M_PI / 3.0;
        triod.endpoints[i] = {radius * std::cos(a), radius * std::sin(a)};
        triod.curves[i] = make_segment({0.0, 0.0}, triod.endpoints[i], n);
    }
    return triod;
}

FlowState state_at(const Triod& triod, double t) {
    FlowState state;
    state.triod = triod;
    state.t = t;
    return state;
}

// Synthetic model frames: rays from the origin with optional sine noise.
SampledCurve noisy_ray(const Vec2& direction, double reach, double amplitude,
                       unsigned seed, std::size_t n = 256) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const double c1 = u(rng), c2 = u(rng);
    SampledCurve curve = make_segment({0.0, 0.0}, direction * reach, n);
    const Vec2 normal = direction.perp();
    for (std::size_t j = 1; j < curve.points.size(); ++j) {
        const double x = static_cast<double>(j) / n;
        curve.points[j] += normal * (amplitude * (c1 * std::sin(M_PI * x) +
                                                  c2 * std::sin(2.0 * M_PI * x)));
    }
    return curve;
}

RescaledFrame synthetic_line(double angle, double amplitude, unsigned seed) {
    const Vec2 d{std::cos(angle), std::sin(angle)};
    return frame_from_curves({noisy_ray(d, 8.0, amplitude, seed),
                              noisy_ray(-1.0 * d, 8.0, amplitude, seed + 1)});
}

RescaledFrame synthetic_halfline(double angle, double amplitude, unsigned seed) {
    const Vec2 d{std::cos(angle), std::sin(angle)};
    return frame_from_curves({noisy_ray(d, 8.0, amplitude, seed)});
}

RescaledFrame synthetic_flat_triod(double angle, double amplitude, unsigned seed) {
    std::vector<SampledCurve> curves;
    for (int i = 0; i < 3; ++i) {
        const double a = angle + i * 2.0 * M_PI / 3.0;
        curves.push_back(noisy_ray({std::cos(a), std::sin(a)}, 8.0, amplitude, seed + i));
    }
    return frame_from_curves(curves);
}

} // namespace

TEST_CASE("rescale_frame: scale factors and translation") {
    const Triod triod = flat_steiner_triod(32);

    // T_hat - t = 1/2: unit scale, pure translation.
    const Vec2 x0{0.25, -0.1};
    const RescaledFrame unit = rescale_frame(state_at(triod, 0.5), x0, 1.0);
    CHECK(unit.frak_t == doctest::Approx(-0.5 * std::log(0.5)));
    for (int i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < triod.curves[i].points.size(); ++j)
            CHECK(dist(unit.curves[i].points[j], triod.curves[i].points[j] - x0) <= 1e-15);

    // T_hat - t = 1/8: factor 2; a curvature 3 becomes 1.5.
    Triod bent = triod;
    bent.curves[0] = make_arc({1.0 / 3.0, 0.0}, 1.0 / 3.0, M_PI, M_PI / 2.0, 32); // k = 3
    const RescaledFrame frame = rescale_frame(state_at(bent, 0.375), {0.0, 0.0}, 0.5);
    const std::size_t mid = 16;
    CHECK(std::abs(std::abs(frame.curves[0].k_tilde[mid]) - 1.5) <= 1e-2);

    // Junction at x0 lands at the origin.
    const RescaledFrame centered = rescale_frame(state_at(triod, 0.0), triod.junction(), 2.0);
    CHECK(centered.curves[0].points.front().norm() <= 1e-15);

    CHECK_THROWS_AS(rescale_frame(state_at(triod, 1.0), x0, 0.5), InvalidHorizon);
}

TEST_CASE("rescaled_density: change of variables is exact") {
    auto config = *preset_scenario("perturbed");
    config.solver.n_nodes = 48;
    const Triod triod = build_initial_triod(config);
    for (double T_hat : {0.3, 1.0, 7.0}) {
        for (const Vec2 x0 : {Vec2{0.0, 0.0}, Vec2{0.4, -0.2}}) {
            const FlowState state = state_at(triod, 0.05);
            const double direct = gaussian_density(state, {x0, T_hat});
            const double rescaled = rescaled_density(rescale_frame(state, x0, T_hat));
            CHECK(std::abs(direct - rescaled) <= 1e-12 * std::max(1.0, direct));
        }
    }
}

TEST_CASE("rescaled_density: model sets score 1, 1/2, 3/2") {
    CHECK(std::abs(rescaled_density(synthetic_line(0.4, 0.0, 1)) - 1.0) <= 1e-3);
    CHECK(std::abs(rescaled_density(synthetic_halfline(1.1, 0.0, 2)) - 0.5) <= 1e-3);
    CHECK(std::abs(rescaled_density(synthetic_flat_triod(0.2, 0.0, 3)) - 1.5) <= 1e-3);
}

TEST_CASE("rescaled_monotonicity_integrand: self-similar sets vanish") {
    CHECK(rescaled_monotonicity_integrand(synthetic_line(0.7, 0.0, 4)) <= 1e-6);
    CHECK(rescaled_monotonicity_integrand(synthetic_flat_triod(1.3, 0.0, 5)) <= 1e-6);
}

TEST_CASE("rescaled_monotonicity_integrand: circle documents the sign convention") {
    // Counterclockwise unit circle: k = +1 against the inward normal, so
    // k + <x, nu> = 0 and the shrinker integrand vanishes.
    const SampledCurve ccw = make_arc({0.0, 0.0}, 1.0, 0.0, 2.0 * M_PI, 512);
    const RescaledFrame good = frame_from_curves({ccw});
    CHECK(rescaled_monotonicity_integrand(good) <= 1e-4);

    // Forcing k_tilde = +1 against the outward normal of the clockwise
    // parametrization measures (1 + 1)^2 rho = 4 rho.
    const SampledCurve cw = make_arc({0.0, 0.0}, 1.0, 2.0 * M_PI, 0.0, 512);
    RescaledFrame flipped = frame_from_curves({cw});
    for (double& k : flipped.curves[0].k_tilde) k = 1.0;
    const double expected = 4.0 * std::sqrt(2.0 * M_PI) * rescaled_density(flipped);
    CHECK(std::abs(rescaled_monotonicity_integrand(flipped) - expected) <= 1e-3 * expected);
}

TEST_CASE("rescaled endpoint integrand: origin and far endpoints vanish") {
    Triod triod = flat_steiner_triod(32);
    // P_tilde at the origin: rescale about an endpoint.
    const RescaledFrame at_end = rescale_frame(state_at(triod, 0.0), triod.endpoints[0], 0.5);
    const auto vals = rescaled_endpoint_integrand(at_end);
    CHECK(std::abs(vals[0]) <= 1e-12);

    // Far endpoints: a tiny horizon scales everything outward.
    const RescaledFrame far = rescale_frame(state_at(triod, 0.0), {0.0, 0.0}, 1e-4);
    CHECK(boundary_term_rescaled_bound(far) <= 1e-12);
}

TEST_CASE("cumulative rescaled endpoint integral bounded by sqrt(pi/2)") {
    auto config = *preset_scenario("obtuse150");
    config.solver.n_nodes = 32;
    config.probes.clear();
    config.monitor.e_pair_budget = 0;
    const RunResult result =
        run(build_initial_triod(config), config.solver, config.probes, config.monitor);
    REQUIRE(result.reason.kind == StopReason::Kind::LengthCollapse);
    const Vec2 x0 = result.final_state.triod.junction();
    const double T_hat = 1.05 * result.final_state.t;
    std::vector<RescaledFrame> frames;
    for (const auto& snap : result.snapshots)
        frames.push_back(rescale_frame(state_at(snap.triod, snap.t), x0, T_hat));
    CHECK(cumulative_endpoint_integral(frames) <= std::sqrt(M_PI / 2.0) + 1e-9);
}

TEST_CASE("classify_blowup: synthetic model sets and impostors") {
    const auto line = classify_blowup(synthetic_line(0.35, 0.015, 11), 4.0);
    CHECK(line.kind == BlowupClass::Kind::Line);
    CHECK(std::abs(line.density_estimate - 1.0) <= 0.1);

    const auto half = classify_blowup(synthetic_halfline(2.0, 0.015, 12), 4.0);
    CHECK(half.kind == BlowupClass::Kind::Halfline);
    CHECK(std::abs(half.density_estimate - 0.5) <= 0.1);

    const auto triod = classify_blowup(synthetic_flat_triod(0.8, 0.015, 13), 4.0);
    CHECK(triod.kind == BlowupClass::Kind::FlatTriod);
    CHECK(std::abs(triod.density_estimate - 1.5) <= 0.1);

    // Unit circle: density 1.52 sits near 3/2 but the geometry does not fit.
    const RescaledFrame circle =
        frame_from_curves({make_arc({0.0, 0.0}, 1.0, 0.0, 2.0 * M_PI, 256)});
    CHECK(classify_blowup(circle, 4.0).kind == BlowupClass::Kind::Unclassified);

    // Random blob.
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    SampledCurve blob;
    Vec2 p{0.0, 0.0};
    for (int j = 0; j <= 64; ++j) {
        blob.points.push_back(p);
        p += Vec2{0.08 * u(rng) + 0.03, 0.08 * u(rng)};
    }
    CHECK(classify_blowup(frame_from_curves({blob}), 4.0).kind ==
          BlowupClass::Kind::Unclassified);

    // Empty window.
    SampledCurve distant = make_segment({50.0, 50.0}, {58.0, 50.0}, 32);
    CHECK(classify_blowup(frame_from_curves({distant}), 4.0).kind ==
          BlowupClass::Kind::Empty);
}

TEST_CASE("classify_blowup: invariant under spatial rescaling of the frame") {
    for (double r : {0.5, 2.0}) {
        RescaledFrame frame = synthetic_flat_triod(0.8, 0.015, 21);
        for (auto& rc : frame.curves) {
            for (auto& p : rc.points) p = p * r;
            for (double& k : rc.k_tilde) k /= r;
            for (double& l : rc.lambda_tilde) l /= r;
        }
        for (auto& e : frame.endpoints_tilde) e = e * r;
        CHECK(classify_blowup(frame, 4.0).kind == BlowupClass::Kind::FlatTriod);
    }
}

TEST_CASE("mass_in_ball: diameters, spokes, monotonicity") {
    CHECK(std::abs(mass_in_ball(synthetic_line(0.45, 0.0, 31), 2.0) - 4.0) <= 1e-6);
    CHECK(std::abs(mass_in_ball(synthetic_flat_triod(1.0, 0.0, 32), 2.0) - 6.0) <= 1e-6);

    const RescaledFrame frame = synthetic_flat_triod(0.3, 0.02, 33);
    double prev = 0.0;
    for (double r = 0.5; r <= 6.0; r += 0.5) {
        const double m = mass_in_ball(frame, r);
        CHECK(m >= prev - 1e-12);
        prev = m;
    }
}

TEST_CASE("rescaled curvature evolution residual shrinks under refinement") {
    auto residual_at = [](std::size_t n, int dt_div) {
        auto config = *preset_scenario("symmetric3");
        config.solver.n_nodes = n;
        config.solver.scheme = Scheme::Explicit;
        FlowState state;
        state.triod = build_initial_triod(config);
        SolverConfig sc = config.solver;
        const double dt = stable_dt(state, sc) / dt_div;
        while (state.t < 0.02) state = step(state, std::min(dt, 0.02 - state.t), sc);
        const FlowState after = step(state, dt, sc);
        const Vec2 x0{0.05, -0.02};
        const double T_hat = 0.5;
        return rescaled_curvature_residual(rescale_frame(state, x0, T_hat),
                                           rescale_frame(after, x0, T_hat));
    };
    const double coarse = residual_at(64, 1);
    const double fine = residual_at(128, 4);
    CHECK(fine <= coarse / 3.0);
}

TEST_CASE("rescaled_curvature_residual: topology and ordering checks") {
    const Triod triod = flat_steiner_triod(32);
    const RescaledFrame f1 = rescale_frame(state_at(triod, 0.0), {0.0, 0.0}, 1.0);
    const RescaledFrame f2 = rescale_frame(state_at(triod, 0.1), {0.0, 0.0}, 1.0);
    CHECK_THROWS_AS(rescaled_curvature_residual(f2, f1), InvalidHorizon);
    const RescaledFrame f3 = rescale_frame(state_at(flat_steiner_triod(64), 0.1),
                                           {0.0, 0.0}, 1.0);
    CHECK_THROWS_AS(rescaled_curvature_residual(f1, f3), TopologyMismatch);
}
