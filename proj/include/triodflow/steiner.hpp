#ifndef TRIODFLOW_STEINER_HPP
#define TRIODFLOW_STEINER_HPP

#include <array>
#include <vector>

#include "triodflow/triod.hpp"
#include "triodflow/vec2.hpp"

namespace triodflow {

// Length-minimizing connection of three endpoints: an interior Fermat
// junction with pairwise 120 degree legs, or two triangle edges when one
// angle reaches 120 degrees.
struct SteinerSolution {
    enum class Kind { Interior, Degenerate };
    Kind kind = Kind::Interior;
    Vec2 fermat;              // valid for Interior
    int degenerate_vertex = -1; // valid for Degenerate
    double total_length = 0.0;
    std::vector<std::array<Vec2, 2>> segments;
};

// Torricelli construction polished by a few Weiszfeld iterations; detects
// the degenerate wide-angle case. Throws CollinearPoints.
SteinerSolution fermat_point(const Vec2& p1, const Vec2& p2, const Vec2& p3);

// Plain Weiszfeld fixed-point iteration started at the centroid.
Vec2 weiszfeld(const Vec2& p1, const Vec2& p2, const Vec2& p3,
               int max_iters = 10000, double tol = 1e-14);

struct SteinerComparison {
    double junction_dist = 0.0;
    double length_gap = 0.0;
    double hausdorff = 0.0;
};

// Distance of a triod state from the Steiner ground truth with matching
// endpoints. junction_dist is +inf for degenerate solutions.
SteinerComparison compare_to_steiner(const Triod& triod, const SteinerSolution& sol);

} // namespace triodflow

#endif
