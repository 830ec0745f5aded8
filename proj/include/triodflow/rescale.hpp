#ifndef TRIODFLOW_RESCALE_HPP
#define TRIODFLOW_RESCALE_HPP

#include <vector>

#include "triodflow/functionals.hpp"

namespace triodflow {

struct RescaledCurve {
    std::vector<Vec2> points;
    std::vector<double> k_tilde;
    std::vector<double> lambda_tilde;
};

// Parabolic zoom of a flow state about x0: points scaled by
// 1/sqrt(2(T_hat - t)), curvature by the inverse factor, with logarithmic
// time frak_t = -log(T_hat - t)/2.
struct RescaledFrame {
    double frak_t = 0.0;
    double source_t = 0.0;
    Vec2 x0;
    double T_hat = 1.0;
    std::vector<RescaledCurve> curves;
    std::vector<Vec2> endpoints_tilde;
    std::vector<Vec2> tau_end;
};

RescaledFrame rescale_frame(const FlowState& state, const Vec2& x0, double T_hat);

// Builds a synthetic frame from bare curves; curvature arrays come from the
// sampled geometry. Used for model sets in tests and classification checks.
RescaledFrame frame_from_curves(const std::vector<SampledCurve>& curves, double frak_t = 0.0);

// Gaussian density of the frame, normalized so a line through the origin
// scores 1. Equals the source-state gaussian_density by change of variables.
double rescaled_density(const RescaledFrame& frame);

// Quadrature of |k_tilde nu + <x,nu> nu|^2 rho over the frame. Zero exactly
// on the self-similar model sets.
double rescaled_monotonicity_integrand(const RescaledFrame& frame);

// Signed endpoint integrand <P_tilde, tau(1)> rho(P_tilde) per curve.
std::vector<double> rescaled_endpoint_integrand(const RescaledFrame& frame);

// Max per-endpoint magnitude for one frame.
double boundary_term_rescaled_bound(const RescaledFrame& frame);

// Max over endpoints of |trapezoidal integral of the signed integrand in
// frak_t| over a frame sequence; bounded by sqrt(pi/2).
double cumulative_endpoint_integral(const std::vector<RescaledFrame>& frames);

struct BlowupClass {
    enum class Kind { Line, Halfline, FlatTriod, Empty, Unclassified };
    Kind kind = Kind::Unclassified;
    Vec2 direction;
    double density_estimate = 0.0;
    double fit_residual = 0.0;

    const char* name() const;
};

struct ClassifyThresholds {
    double eps_fit = 0.05;
    double eps_angle = 3.0 * M_PI / 180.0;
    double eps_theta = 0.1;
};

// Fits the windowed nodes against the three blow-up models in the order
// line, halfline, flat triod; the Gaussian density fingerprint {1, 1/2, 3/2}
// arbitrates, and a failed cross-check downgrades to Unclassified.
BlowupClass classify_blowup(const RescaledFrame& frame, double window_radius,
                            const ClassifyThresholds& thresholds = {});

// Polyline mass inside the ball B_R(0), segments clipped at the circle.
double mass_in_ball(const RescaledFrame& frame, double radius);

// Residual of the rescaled curvature evolution between two consecutive
// frames on identical topology.
double rescaled_curvature_residual(const RescaledFrame& before, const RescaledFrame& after);

} // namespace triodflow

#endif
