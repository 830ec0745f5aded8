#ifndef TRIODFLOW_RUNNER_HPP
#define TRIODFLOW_RUNNER_HPP

#include <iosfwd>
#include <string>

#include "triodflow/scenario.hpp"
#include "triodflow/vec2.hpp"

namespace triodflow {

// Exit codes shared by the CLI subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitSolver = 2;
inline constexpr int kExitCheckFailed = 3;

// Executes a scenario (preset name or config path) and writes monitors.csv,
// final_state.json and snapshots/ under the output directory.
int cli_run(const std::string& config_or_preset, const std::string& output_override,
            std::ostream& out, std::ostream& err);

// Re-ingests a run directory, rescales its snapshots about x0 with horizon
// T_hat and writes frames.csv plus rescaled SVGs.
int cli_blowup(const std::string& run_dir, const Vec2& x0, double T_hat,
               double window_radius, std::ostream& out, std::ostream& err);

int cli_steiner(const Vec2& p1, const Vec2& p2, const Vec2& p3, std::ostream& out,
                std::ostream& err);

int cli_render(const std::string& state_path, const std::string& svg_path,
               std::ostream& out, std::ostream& err);

} // namespace triodflow

#endif
