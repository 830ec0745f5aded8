#ifndef TRIODFLOW_RUN_HPP
#define TRIODFLOW_RUN_HPP

#include <optional>
#include <string>
#include <vector>

#include "triodflow/errors.hpp"
#include "triodflow/functionals.hpp"
#include "triodflow/solver.hpp"

namespace triodflow {

struct MonitorConfig {
    int record_every = 10;
    int snapshot_every = 0; // 0: same cadence as records
    long e_pair_budget = 2000;
};

struct RunResult {
    std::vector<MonitorRecord> series;
    std::vector<Snapshot> snapshots;
    FlowState final_state;
    StopReason reason;
};

// A solver failure mid-run; carries the series accumulated so far.
struct RunAborted : Error {
    RunAborted(const std::string& msg, RunResult partial_)
        : Error(msg), partial(std::move(partial_)) {}
    RunResult partial;
};

// Time loop: step, periodic arclength resampling, monitor recording, and
// the first-match stopping rule TimeMax / LengthCollapse / CurvatureBlowup /
// SteadyState. Off-balance initial junctions are corrected before t = 0.
RunResult run(const Triod& initial, const SolverConfig& config,
              const std::vector<KernelConfig>& probes, const MonitorConfig& monitor = {});

} // namespace triodflow

#endif
