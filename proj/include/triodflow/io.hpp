#ifndef TRIODFLOW_IO_HPP
#define TRIODFLOW_IO_HPP

#include <string>
#include <vector>

#include "triodflow/run.hpp"
#include "triodflow/scenario.hpp"

namespace triodflow {

struct ScenarioConfig;

// Shortest round-trippable decimal representation (printf %.17g).
std::string format_double(double value);

// monitors.csv with the fixed header
// t,L1,L2,L3,L,k2_int,k_sup,theta_<p>,b_rate_<p>,...,E,Ox,Oy,res_angle,res_sumk,res_sumlambda
std::string monitor_csv(const std::vector<MonitorRecord>& series, std::size_t n_probes);
void write_monitor_csv(const std::string& path, const std::vector<MonitorRecord>& series,
                       std::size_t n_probes);

// Plain-text node lists: one row "curve node x y" per node.
std::string node_list_text(const std::vector<SampledCurve>& curves);
void write_node_list(const std::string& path, const std::vector<SampledCurve>& curves);
std::vector<SampledCurve> read_node_list(const std::string& path);

void write_final_state_json(const std::string& path, const ScenarioConfig& config,
                            const RunResult& result);

// snapshots/index.csv rows "file,t".
void write_snapshot_index(const std::string& path,
                          const std::vector<std::pair<std::string, double>>& entries);
std::vector<std::pair<std::string, double>> read_snapshot_index(const std::string& path);

} // namespace triodflow

#endif
