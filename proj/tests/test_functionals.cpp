#include <doctest.h>

#include <cmath>

#include "triodflow/errors.hpp"
#include "triodflow/intersect.hpp"
#include "triodflow/run.hpp"
#include "triodflow/scenario.hpp"

using namespace triodflow;

namespace {

constexpr double kFourRootThree = 6.928203230275509; // 4 sqrt(3)

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

// Exhaustive node-pair scan, the reference for the stratified version.
double brute_force_E(const Triod& triod) {
    double best = kFourRootThree;
    std::vector<NodeLocator> nodes;
    for (int c = 0; c < 3; ++c)
        for (int j = (c == 0 ? 0 : 1); j <= triod.curves[c].n(); ++j)
            nodes.push_back({c, j});
    for (std::size_t a = 0; a < nodes.size(); ++a)
        for (std::size_t b = a + 1; b < nodes.size(); ++b) {
            const Vec2 p = triod.at(nodes[a]);
            const Vec2 q = triod.at(nodes[b]);
            const double d2 = dist2(p, q);
            const double area = enclosed_area(p, q, tree_geodesic(triod, nodes[a], nodes[b]));
            if (area > 1e-14 * d2) best = std::min(best, d2 / area);
        }
    return best;
}

// Simpson quadrature of the standard normal tail, the independent oracle
// for boundary_term_bound.
double normal_tail_quadrature(double z) {
    const double upper = z + 12.0;
    const int steps = 20000;
    const double h = (upper - z) / steps;
    auto f = [](double y) { return std::exp(-0.5 * y * y); };
    double sum = f(z) + f(upper);
    for (int i = 1; i < steps; ++i) sum += f(z + i * h) * (i % 2 ? 4.0 : 2.0);
    return sum * h / 3.0 / std::sqrt(2.0 * M_PI);
}

} // namespace

TEST_CASE("lengths: unit segments, Steiner radii, quarter circle") {
    Triod unit;
    unit.domain = DomainShape::disc({0.0, 0.0}, 2.0);
    unit.curves[0] = make_segment({0.0, 0.0}, {1.0, 0.0}, 16);
    unit.curves[1] = make_segment({0.0, 0.0}, {0.0, 1.0}, 16);
    unit.curves[2] = make_segment({0.0, 0.0}, {-1.0, 0.0}, 16);
    const Lengths l = lengths(unit);
    CHECK(l.l1 == doctest::Approx(1.0));
    CHECK(l.l2 == doctest::Approx(1.0));
    CHECK(l.l3 == doctest::Approx(1.0));
    CHECK(l.total == doctest::Approx(3.0));

    const Lengths s = lengths(flat_steiner_triod(32));
    CHECK(s.l1 == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.total == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(std::abs(s.total - (s.l1 + s.l2 + s.l3)) <= 1e-12);

    const SampledCurve arc = make_arc({0.0, 0.0}, 1.0, 0.0, M_PI / 2.0, 64);
    CHECK(std::abs(arc.chord_length() - M_PI / 2.0) <= 1e-3);
}

TEST_CASE("curvature_l2: zero on Steiner, arclength on unit circle arcs") {
    CHECK(curvature_l2(flat_steiner_triod(32)) <= 1e-12);

    // ds-weighted k^2 over unit-circle arcs equals their total arclength.
    Triod arcs;
    arcs.domain = DomainShape::disc({0.0, 0.0}, 5.0);
    arcs.curves[0] = make_arc({1.0, 0.0}, 1.0, M_PI, M_PI + 1.2, 128);
    arcs.curves[1] = make_arc({-1.0, 0.0}, 1.0, 0.0, 0.9, 128);
    arcs.curves[2] = make_segment({0.0, 0.0}, {0.0, 2.0}, 128);
    const double sum = curvature_l2(arcs);
    CHECK(sum == doctest::Approx(1.2 + 0.9).epsilon(1e-3));
}

TEST_CASE("curvature_l2: Richardson refinement limit") {
    auto k2_at = [](std::size_t n) {
        auto config = *preset_scenario("perturbed");
        config.solver.n_nodes = n;
        return curvature_l2(build_initial_triod(config));
    };
    const double i1 = k2_at(128), i2 = k2_at(256), i4 = k2_at(512);
    const double limit = (4.0 * i4 - i2) / 3.0;
    CHECK(std::abs(i1 - limit) <= 5e-3 * std::abs(limit));
    CHECK(std::abs(i2 - limit) <= 0.35 * std::abs(i1 - limit));
}

TEST_CASE("gaussian_density: model-set fingerprints at moderate size") {
    const double T = 0.5; // scale factor sqrt(2(T-t)) = 1 at t = 0
    const double R = 8.0;
    const Vec2 x0{0.4, -0.3};

    std::vector<SampledCurve> line{make_segment(x0 - Vec2{R, 0.0}, x0 + Vec2{R, 0.0}, 4096)};
    CHECK(std::abs(gaussian_density(line, 0.0, {x0, T}) - 1.0) <= 1e-3);

    std::vector<SampledCurve> halfline{make_segment(x0, x0 + Vec2{0.0, R}, 4096)};
    CHECK(std::abs(gaussian_density(halfline, 0.0, {x0, T}) - 0.5) <= 1e-3);

    std::vector<SampledCurve> triod;
    for (int i = 0; i < 3; ++i) {
        const double a = 0.3 + i * 2.0 * M_PI / 3.0;
        triod.push_back(make_segment(x0, x0 + Vec2{R * std::cos(a), R * std::sin(a)}, 4096));
    }
    CHECK(std::abs(gaussian_density(triod, 0.0, {x0, T}) - 1.5) <= 1e-3);

    CHECK_THROWS_AS(gaussian_density(line, 1.0, {x0, 0.5}), InvalidHorizon);
}

TEST_CASE("gaussian_density: decays monotonically in probe distance") {
    const Triod triod = flat_steiner_triod(64);
    double prev = 1e300;
    for (double r : {2.0, 4.0, 8.0}) {
        const double theta = gaussian_density(state_at(triod, 0.0), {{r, 0.1}, 1.0});
        CHECK(theta < prev);
        prev = theta;
    }
    CHECK(prev <= 1e-6);
}

TEST_CASE("boundary_term_rate: re-evaluation, flat-kernel bound, orthogonality") {
    const Triod triod = flat_steiner_triod(64);
    const FlowState state = state_at(triod, 0.0);
    const double T = 2.0;
    const KernelConfig kernel{{0.3, 0.2}, T};

    // Independent re-evaluation of the displayed sum.
    double expected = 0.0;
    for (int i = 0; i < 3; ++i) {
        const CurveGeometry g = differentiate(triod.curves[i]);
        const Vec2 endpoint = triod.curves[i].points.back();
        const double rho = std::exp(-dist2(endpoint, kernel.x0) / (4.0 * T)) /
                           std::sqrt(4.0 * M_PI * T);
        expected += (endpoint - kernel.x0).dot(g.tau.back()) / (2.0 * T) * rho;
    }
    CHECK(std::abs(boundary_term_rate(state, kernel) - expected) <= 1e-12);

    // Magnitude bound 3 max|P - x0| / (2(T-t)) rho_max for a flat kernel.
    const double bound = 3.0 * 1.3 / (2.0 * T) / std::sqrt(4.0 * M_PI * T);
    CHECK(std::abs(boundary_term_rate(state, kernel)) <= bound);

    // Orthogonal configuration: end tangents normal to P - x0 cancel the
    // rate. Rotate each leg into a spiral arm whose outer tangent is
    // orthogonal to the radius by attaching a quarter-turn arc.
    Triod ortho = triod;
    for (int i = 0; i < 3; ++i) {
        const double a = M_PI / 2.0 + i * 2.0 * M_PI / 3.0;
        // Arc centred on the endpoint direction: tangent at the outer end
        // is orthogonal to the radius through it.
        ortho.curves[i] = make_arc({0.0, 0.0}, 1.0, a - 0.4, a, 64);
        const Vec2 shift = Vec2{0.0, 0.0} - ortho.curves[i].points.front();
        for (auto& p : ortho.curves[i].points) p += shift;
        ortho.endpoints[i] = ortho.curves[i].points.back();
    }
    ortho.domain = DomainShape::disc({0.0, 0.0}, 2.5);
    double rate = 0.0;
    for (int i = 0; i < 3; ++i) {
        const CurveGeometry g = differentiate(ortho.curves[i]);
        const Vec2 endpoint = ortho.curves[i].points.back();
        // Probe from the arc center shifted identically: P - x0 is the arc
        // radius, orthogonal to the arc tangent.
        const Vec2 x0 = ortho.curves[i].points.front() - (make_arc({0.0, 0.0}, 1.0,
            M_PI / 2.0 + i * 2.0 * M_PI / 3.0 - 0.4, M_PI / 2.0 + i * 2.0 * M_PI / 3.0, 64)
            .points.front());
        rate = (endpoint - x0).dot(g.tau.back());
        CHECK(std::abs(rate) <= 2e-2); // orthogonal up to the stencil error
    }
}

TEST_CASE("boundary_term_bound: endpoint values and quadrature oracle") {
    CHECK(boundary_term_bound(0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-15));

    // d / sqrt(2 horizon) = 1.
    const double v = boundary_term_bound(std::sqrt(2.0), 1.0);
    CHECK(std::abs(v - 0.158655) <= 1e-6);
    CHECK(std::abs(v - normal_tail_quadrature(1.0)) <= 1e-9);

    CHECK(boundary_term_bound(1e6, 1.0) <= 1e-12);

    double prev = 0.5 + 1e-12;
    for (double d = 0.0; d <= 5.0; d += 0.25) {
        const double b = boundary_term_bound(d, 0.7);
        CHECK(b >= 0.0);
        CHECK(b <= 0.5);
        CHECK(b < prev);
        prev = b;
    }
}

TEST_CASE("monotonicity_defect: stationary series satisfies the identity") {
    const Triod triod = flat_steiner_triod(256);
    const KernelConfig kernel{{0.1, 0.05}, 1.0};
    std::vector<MonitorRecord> series;
    for (int i = 0; i <= 40; ++i)
        series.push_back(make_monitor_record(state_at(triod, i * 2e-3), {kernel}, 0));
    const MonotonicityReport report = monotonicity_defect(series, 0);
    CHECK(report.max_defect <= 1e-6);
    for (std::size_t i = 0; i < report.interval_lhs.size(); ++i)
        CHECK(std::abs(report.interval_lhs[i] - report.interval_rhs[i]) <= 1e-6);

    std::vector<MonitorRecord> two(series.begin(), series.begin() + 2);
    CHECK_THROWS_AS(monotonicity_defect(two, 0), InsufficientRecords);
}

TEST_CASE("embeddedness_E: exact Steiner triod scores 4 sqrt 3") {
    const Triod triod = flat_steiner_triod(32);
    const double e_all = embeddedness_E(triod, 1L << 40);
    CHECK(std::abs(e_all - kFourRootThree) <= 1e-9);
    CHECK(std::abs(brute_force_E(triod) - kFourRootThree) <= 1e-9);
    CHECK(e_all == doctest::Approx(brute_force_E(triod)).epsilon(1e-14));
}

TEST_CASE("embeddedness_E: subsampled value upper-bounds the exact one") {
    auto config = *preset_scenario("perturbed");
    config.solver.n_nodes = 24;
    const Triod triod = build_initial_triod(config);
    const double exact = embeddedness_E(triod, 1L << 40);
    for (long budget : {60L, 300L, 3000L}) {
        const double sub = embeddedness_E(triod, budget);
        CHECK(sub >= exact - 1e-12);
        CHECK(sub <= kFourRootThree + 1e-12);
    }
}

TEST_CASE("embeddedness_E: near-touching arms drive E down to gap^2 / area") {
    Triod triod = flat_steiner_triod(64);
    const double pull = 0.8; // fraction of the arm separation closed
    for (int i : {1, 2}) {
        auto& pts = triod.curves[i].points;
        const Vec2 dir = (triod.endpoints[i] - triod.junction()).normalized();
        const Vec2 toward = (i == 1 ? -1.0 : 1.0) * dir.perp();
        for (std::size_t j = 1; j + 1 < pts.size(); ++j) {
            const double x = static_cast<double>(j) / pts.size();
            pts[j] += toward * (pull * 0.4 * std::sin(M_PI * x));
        }
    }
    REQUIRE(self_intersections(triod).empty());
    const double e = embeddedness_E(triod, 1L << 40);
    CHECK(e < 0.5 * kFourRootThree);
    CHECK(e > 0.0);
}

TEST_CASE("embeddedness_E: dilation invariance of Phi values") {
    auto config = *preset_scenario("perturbed");
    config.solver.n_nodes = 24;
    const Triod base = build_initial_triod(config);
    const double e0 = embeddedness_E(base, 5000);
    for (double r : {0.5, 2.0, 10.0}) {
        Triod scaled = base;
        scaled.domain = DomainShape::disc({0.0, 0.0}, r);
        for (int i = 0; i < 3; ++i) {
            for (auto& p : scaled.curves[i].points) p = p * r;
            scaled.endpoints[i] = scaled.endpoints[i] * r;
        }
        const double er = embeddedness_E(scaled, 5000);
        if (r == 10.0)
            CHECK(std::abs(er - e0) <= 1e-12 * e0);
        else
            CHECK(er == e0); // power-of-two dilation is exact in floating point
    }
}

TEST_CASE("embeddedness_E: rejects non-embedded input") {
    Triod triod = flat_steiner_triod(16);
    const Vec2 target = triod.curves[1].points[8];
    triod.curves[0].points[16] = target + (target - triod.junction()) * 0.2;
    CHECK_THROWS_AS(embeddedness_E(triod, 100), NotEmbedded);
}

TEST_CASE("reachable_check: on-triod point and far point") {
    const Triod triod = flat_steiner_triod(32);
    std::vector<Snapshot> snaps;
    for (int i = 0; i < 5; ++i) snaps.push_back({i * 0.01, triod});

    const auto on = reachable_check(snaps, triod.curves[0].points[7], 1.0);
    CHECK(on.is_reachable_consistent);
    CHECK(on.max_violation <= 1e-12);

    const auto far = reachable_check(snaps, {50.0, 0.0}, 0.1);
    CHECK_FALSE(far.is_reachable_consistent);
}

TEST_CASE("reachable_check: shrinking-ball inequality along a collapse run") {
    auto config = *preset_scenario("obtuse150");
    config.solver.n_nodes = 32;
    config.probes.clear();
    config.monitor.e_pair_budget = 0;
    const RunResult result =
        run(build_initial_triod(config), config.solver, config.probes, config.monitor);
    REQUIRE(result.reason.kind == StopReason::Kind::LengthCollapse);
    const Vec2 x = result.final_state.triod.junction();
    const double T_hat = 1.05 * result.final_state.t;
    const auto report = reachable_check(result.snapshots, x, T_hat);
    CHECK(report.max_violation <= 1e-6);
    CHECK(report.is_reachable_consistent);
}

TEST_CASE("kkevol_bound_check: stationary run fits zero constants") {
    const Triod triod = flat_steiner_triod(64);
    std::vector<Snapshot> snaps;
    for (int i = 0; i < 6; ++i) snaps.push_back({i * 0.01, triod});
    const KkevolReport report = kkevol_bound_check(snaps, 0.5);
    CHECK(report.c1 == 0.0);
    CHECK(report.c2 == 0.0);
    for (double d : report.defect) CHECK(d <= 1e-12);
    for (double l : report.lhs) CHECK(std::abs(l) <= 1e-9);
}

TEST_CASE("kkevol_bound_check: fitted constants stable under refinement") {
    auto fitted = [](std::size_t n) {
        auto config = *preset_scenario("perturbed");
        config.solver.n_nodes = n;
        config.solver.t_max = 0.05;
        config.probes.clear();
        config.monitor.e_pair_budget = 0;
        config.monitor.record_every = 50;
        const RunResult result =
            run(build_initial_triod(config), config.solver, config.probes, config.monitor);
        return kkevol_bound_check(result.snapshots, 0.5);
    };
    const KkevolReport coarse = fitted(64);
    const KkevolReport fine = fitted(128);
    CHECK(std::isfinite(coarse.c1));
    CHECK(std::isfinite(fine.c1));
    for (double d : coarse.defect) CHECK(d <= 1e-9);
    const double lo = std::min(coarse.c1, fine.c1), hi = std::max(coarse.c1, fine.c1);
    CHECK(hi <= 4.0 * lo + 1e-6);
}

TEST_CASE("kkevol_bound_check: cut circle missing a curve") {
    const Triod triod = flat_steiner_triod(32);
    std::vector<Snapshot> snaps{{0.0, triod}, {0.01, triod}};
    CHECK_THROWS_AS(kkevol_bound_check(snaps, 5.0), CutNotTransversal);
}
