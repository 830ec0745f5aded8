#include "triodflow/run.hpp"

#include <algorithm>

namespace triodflow {

namespace {

void resample_triod(Triod& triod, std::size_t n_nodes) {
    for (auto& curve : triod.curves) curve = resample_arclength(curve, n_nodes);
}

int stop_priority_min_length_curve(const Triod& triod) {
    int arg = 0;
    double best = triod.curves[0].chord_length();
    for (int i = 1; i < 3; ++i) {
        const double l = triod.curves[i].chord_length();
        if (l < best) { best = l; arg = i; }
    }
    return arg;
}

} // namespace

RunResult run(const Triod& initial, const SolverConfig& config,
              const std::vector<KernelConfig>& probes, const MonitorConfig& monitor) {
    config.validate();

    RunResult result;
    FlowState state;
    state.triod = initial;
    if (state.triod.curves[0].segment_count() != config.n_nodes)
        resample_triod(state.triod, config.n_nodes);
    // Incompatible initial data: balance the junction before t = 0.
    enforce_junction(state.triod, config.tol_angle, config.junction_max_iters);
    resample_triod(state.triod, config.n_nodes);
    enforce_junction(state.triod, config.tol_angle, config.junction_max_iters);

    const int snapshot_every =
        monitor.snapshot_every > 0 ? monitor.snapshot_every : monitor.record_every;

    auto record = [&](const FlowState& s) {
        result.series.push_back(make_monitor_record(s, probes, monitor.e_pair_budget));
    };
    auto snapshot = [&](const FlowState& s) {
        result.snapshots.push_back({s.t, s.triod});
    };

    try {
        record(state);
        snapshot(state);
        long last_recorded = 0;
        long last_snapshot = 0;
        while (true) {
            const double factor =
                config.scheme == Scheme::SemiImplicit ? config.semi_implicit_dt_factor : 1.0;
            const double dt = factor * stable_dt(state, config);
            state = step(state, dt, config);
            if (config.resample_every > 0 && state.step_index % config.resample_every == 0) {
                resample_triod(state.triod, config.n_nodes);
                enforce_junction(state.triod, config.tol_angle, config.junction_max_iters);
            }

            std::optional<StopReason> stop;
            if (state.t >= config.t_max) {
                stop = StopReason{StopReason::Kind::TimeMax, -1};
            } else if (state.triod.min_curve_length() < config.eps_collapse) {
                stop = StopReason{StopReason::Kind::LengthCollapse,
                                  stop_priority_min_length_curve(state.triod)};
            } else if (curvature_l2(state.triod) > config.k2_blow) {
                stop = StopReason{StopReason::Kind::CurvatureBlowup, -1};
            } else if (state.max_speed_last < config.eps_steady) {
                stop = StopReason{StopReason::Kind::SteadyState, -1};
            }

            const bool due_record = state.step_index - last_recorded >= monitor.record_every;
            const bool due_snapshot = state.step_index - last_snapshot >= snapshot_every;
            if (due_record || stop) {
                record(state);
                last_recorded = state.step_index;
            }
            if (due_snapshot || stop) {
                snapshot(state);
                last_snapshot = state.step_index;
            }
            if (stop) {
                result.final_state = state;
                result.reason = *stop;
                return result;
            }
        }
    } catch (const Error& err) {
        result.final_state = state;
        throw RunAborted(err.what(), std::move(result));
    }
}

} // namespace triodflow
