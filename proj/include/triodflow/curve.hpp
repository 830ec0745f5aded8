#ifndef TRIODFLOW_CURVE_HPP
#define TRIODFLOW_CURVE_HPP

#include <cstddef>
#include <vector>

#include "triodflow/vec2.hpp"

namespace triodflow {

// A regular planar curve sampled at the uniform parameter grid x_j = j/N.
// points has N+1 entries; node 0 is the junction end for triod curves.
struct SampledCurve {
    std::vector<Vec2> points;

    std::size_t segment_count() const { return points.empty() ? 0 : points.size() - 1; }
    int n() const { return static_cast<int>(segment_count()); }

    double chord_length() const;          // total polyline length
    double min_chord() const;
    double diameter() const;              // bounding-box diagonal
    bool finite() const;

    // Throws DegenerateSegment / InvariantViolation when the regularity
    // invariant fails.
    void validate(std::size_t min_segments = 8) const;
};

// Pointwise geometric quantities along one curve: unit tangent tau, unit
// normal nu = perp(tau), curvature k, tangential velocity lambda, velocity
// v = gamma_xx/|gamma_x|^2, arclength quadrature weights ds and |gamma_x|.
struct CurveGeometry {
    std::vector<Vec2> tau;
    std::vector<Vec2> nu;
    std::vector<double> k;
    std::vector<double> lambda;
    std::vector<Vec2> v;
    std::vector<double> ds;
    std::vector<double> gamma_x_norm;
};

// Finite-difference derivatives on the uniform parameter grid: central
// stencils inside, one-sided second-order stencils at both ends.
CurveGeometry differentiate(const SampledCurve& curve);

// First derivative of a nodal scalar field with respect to arclength,
// using the same stencil policy as differentiate().
std::vector<double> arclength_derivative(const std::vector<double>& f,
                                         const CurveGeometry& geom);

// Second arclength derivative: f_ss = f_xx/g^2 - f_x g_x/g^3 with
// g = |gamma_x|.
std::vector<double> arclength_second_derivative(const std::vector<double>& f,
                                                const CurveGeometry& geom);

// Redistribute N+1 nodes uniformly in cumulative chord length; endpoints
// are preserved exactly and new nodes lie on the input polyline.
SampledCurve resample_arclength(const SampledCurve& curve, std::size_t n_segments);

// Straight segment sampled uniformly with n_segments chords.
SampledCurve make_segment(const Vec2& a, const Vec2& b, std::size_t n_segments);

// Circular arc around `center`, angles in radians, counterclockwise when
// angle1 > angle0.
SampledCurve make_arc(const Vec2& center, double radius, double angle0,
                      double angle1, std::size_t n_segments);

} // namespace triodflow

#endif
