#ifndef TRIODFLOW_FUNCTIONALS_HPP
#define TRIODFLOW_FUNCTIONALS_HPP

#include <array>
#include <vector>

#include "triodflow/solver.hpp"

namespace triodflow {

// Backward heat kernel parameters: center x0 and reference singular time
// T_hat, required to stay above every evaluation time.
struct KernelConfig {
    Vec2 x0;
    double T_hat = 1.0;
};

struct Lengths {
    double l1 = 0.0, l2 = 0.0, l3 = 0.0, total = 0.0;
};

// One time slice of the scalar monitors. theta/b_rate/mon_rhs carry one
// entry per probe kernel; mon_rhs stores the nonnegative monotonicity
// integrand (not exported to CSV).
struct MonitorRecord {
    double t = 0.0;
    Lengths lengths;
    double k2_int = 0.0;
    double k_sup = 0.0;
    std::vector<double> theta;
    std::vector<double> b_rate;
    std::vector<double> mon_rhs;
    double embeddedness = 0.0;
    Vec2 junction;
    JunctionResiduals residuals;
};

// A stored state of a run, the input of the snapshot-based diagnostics.
struct Snapshot {
    double t = 0.0;
    Triod triod;
};

Lengths lengths(const Triod& triod);
inline Lengths lengths(const FlowState& state) { return lengths(state.triod); }

double curvature_l2(const Triod& triod);
inline double curvature_l2(const FlowState& state) { return curvature_l2(state.triod); }

double curvature_sup(const Triod& triod);

// Gaussian density Theta(x0,t): backward heat kernel integrated over the
// network with trapezoidal arclength weights.
double gaussian_density(const std::vector<SampledCurve>& curves, double t,
                        const KernelConfig& kernel);
double gaussian_density(const FlowState& state, const KernelConfig& kernel);

// Boundary term of the monotonicity identity, evaluated with the discrete
// end tangents.
double boundary_term_rate(const FlowState& state, const KernelConfig& kernel);

// Gaussian tail bound for the accumulated boundary term; always in [0, 1/2].
double boundary_term_bound(double d, double horizon);

// Nonnegative dissipation integral |k + (x-x0)^perp / (2(T-t))|^2 rho ds.
double monotonicity_dissipation(const FlowState& state, const KernelConfig& kernel);

struct MonotonicityReport {
    double max_defect = 0.0;           // max slope of Theta + b
    std::vector<double> interval_lhs;  // d(Theta+b)/dt per record interval
    std::vector<double> interval_rhs;  // -(average dissipation) per interval
};

// Reconstructs b backwards from the series end (b -> 0 at the horizon) and
// compares the slope of Theta + b with the dissipation quadrature.
MonotonicityReport monotonicity_defect(const std::vector<MonitorRecord>& series,
                                       std::size_t probe_index);

// inf over node pairs of |p-q|^2 / A_{p,q}, capped by the junction value
// 4 sqrt(3). Pairs are stratified per curve pair and subsampled when the
// budget is exceeded, so the result is an upper bound for the exact E.
double embeddedness_E(const Triod& triod, long pair_budget);
inline double embeddedness_E(const FlowState& state, long pair_budget) {
    return embeddedness_E(state.triod, pair_budget);
}

struct ReachableReport {
    bool is_reachable_consistent = false;
    double max_violation = 0.0;
};

// Shrinking-ball test: d_x^2(t) - d_x^2(s) <= 2(s-t) across record pairs and
// d_x^2(t) <= 2(T_hat - t) + tol at every record.
ReachableReport reachable_check(const std::vector<Snapshot>& snapshots, const Vec2& x,
                                double T_hat, double tol = 1e-6);

struct KkevolReport {
    std::vector<double> t;       // interval midpoints
    std::vector<double> lhs;     // d/dt of the cut k^2 integral
    std::vector<double> rhs;     // fitted bound
    std::vector<double> defect;  // lhs - rhs
    double c1 = 0.0, c2 = 0.0;   // fitted constants (joint fit c1 = c2)
};

// Differential inequality for the L2 curvature of the triod cut at the
// circle of radius cut_radius around the junction; constants are fitted as
// the smallest joint value making the bound hold over the run.
KkevolReport kkevol_bound_check(const std::vector<Snapshot>& snapshots, double cut_radius);

// Assembles one monitor record; e_pair_budget <= 0 keeps only the junction
// pair in the embeddedness scan.
MonitorRecord make_monitor_record(const FlowState& state,
                                  const std::vector<KernelConfig>& probes,
                                  long e_pair_budget);

} // namespace triodflow

#endif
