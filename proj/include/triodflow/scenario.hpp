#ifndef TRIODFLOW_SCENARIO_HPP
#define TRIODFLOW_SCENARIO_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "triodflow/run.hpp"

namespace triodflow {

struct InitialSpec {
    enum class Type { SteinerExact, Perturbed, File };
    Type type = Type::SteinerExact;
    double amplitude = 0.0;
    unsigned seed = 0;
    bool symmetric = false; // same perturbation modes on all three curves
    std::string path;       // node-list file for Type::File
};

struct ScenarioConfig {
    DomainShape domain = DomainShape::disc({0.0, 0.0}, 1.0);
    std::array<Vec2, 3> endpoints;
    InitialSpec initial;
    SolverConfig solver;
    std::vector<KernelConfig> probes;
    MonitorConfig monitor;
    std::string output_dir = "out";

    void validate() const;
};

// Parses the JSON scenario text; throws ConfigError with a diagnostic.
ScenarioConfig parse_scenario(const std::string& json_text);
ScenarioConfig load_scenario_file(const std::string& path);
std::string scenario_to_json(const ScenarioConfig& config);

// Shipped scenario presets: equilateral, perturbed, symmetric3, obtuse150.
std::optional<ScenarioConfig> preset_scenario(const std::string& name);
std::vector<std::string> preset_names();

// Builds the initial triod: Steiner-exact legs when the Fermat point is
// interior (centroid legs otherwise), optional seeded sine-mode normal
// perturbation, curves ordered counterclockwise around the junction, and
// the junction balanced before use.
Triod build_initial_triod(const ScenarioConfig& config);

} // namespace triodflow

#endif
