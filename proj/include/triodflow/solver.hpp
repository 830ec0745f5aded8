#ifndef TRIODFLOW_SOLVER_HPP
#define TRIODFLOW_SOLVER_HPP

#include <array>

#include "triodflow/triod.hpp"

namespace triodflow {

enum class Scheme { Explicit, SemiImplicit };

struct SolverConfig {
    double cfl = 0.25;
    std::size_t n_nodes = 64;      // segments per curve
    int resample_every = 10;       // steps between arclength redistributions
    double t_max = 1.0;
    double eps_collapse = 1e-2;    // min curve length triggering LengthCollapse
    double k2_blow = 1e6;          // integral k^2 ds triggering CurvatureBlowup
    double eps_steady = 1e-4;      // max node speed triggering SteadyState
    Scheme scheme = Scheme::SemiImplicit;
    double semi_implicit_dt_factor = 10.0;
    double tol_angle = 1e-9;
    int junction_max_iters = 50;

    void validate() const;
};

struct FlowState {
    double t = 0.0;
    Triod triod;
    long step_index = 0;
    double dt_last = 0.0;
    long projection_count = 0;   // interior nodes pushed back into the domain
    double max_speed_last = 0.0; // max |dp|/dt over the last accepted step
};

struct StopReason {
    enum class Kind { TimeMax, LengthCollapse, CurvatureBlowup, SteadyState };
    Kind kind = Kind::TimeMax;
    int curve = -1; // collapsing curve for LengthCollapse

    const char* name() const;
};

// Parabolic stability bound: cfl * (min chord length)^2.
double stable_dt(const FlowState& state, const SolverConfig& config);

// One accepted step of the flow: interior update by the configured scheme,
// fixed outer endpoints, junction moved by a damped Newton solve of the
// tangent balance, then containment projection (counted, not expected).
FlowState step(const FlowState& state, double dt, const SolverConfig& config);

// Move the junction so the three one-sided unit tangents sum to zero.
// Returns the number of Newton iterations used.
int enforce_junction(Triod& triod, double tol_angle, int max_iters);

struct JunctionResiduals {
    double concurrency = 0.0;   // max pairwise junction-node distance
    double angle = 0.0;         // |sum of junction tangents|
    double sum_k = 0.0;         // |sum of junction curvatures|
    double sum_lambda = 0.0;    // |sum of junction tangential velocities|
    double flux_spread = 0.0;   // max_{i,j} |(k_s + lambda k)_i - (k_s + lambda k)_j|
    double lambda_identity = 0.0; // max_i |lambda_i - (k_{i-1}-k_{i+1})/sqrt(3)|
};

JunctionResiduals junction_residuals(const FlowState& state);

struct PdeResiduals {
    double res_k = 0.0;
    double res_lambda = 0.0;
    double res_tau = 0.0;
};

// Residuals of the evolution equations for k, lambda and tau between two
// states on identical node topology, evaluated at the midpoint state.
PdeResiduals pde_residual_check(const FlowState& before, const FlowState& after, double dt);

// Discrete mismatch of the commutation rule dt ds - ds dt = (k^2 - lambda_s) ds
// applied to the curvature field.
double commutation_defect(const FlowState& before, const FlowState& after, double dt);

} // namespace triodflow

#endif
