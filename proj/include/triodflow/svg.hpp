#ifndef TRIODFLOW_SVG_HPP
#define TRIODFLOW_SVG_HPP

#include <optional>
#include <string>
#include <vector>

#include "triodflow/rescale.hpp"
#include "triodflow/triod.hpp"

namespace triodflow {

// Triod snapshot: domain boundary, the three curves in distinct stroke
// classes, junction marker.
std::string triod_svg(const Triod& triod);
std::string curves_svg(const std::vector<SampledCurve>& curves,
                       const std::optional<DomainShape>& domain);
void write_triod_svg(const std::string& path, const Triod& triod);

// Rescaled frame: curves, origin cross, unit circle reference.
std::string frame_svg(const RescaledFrame& frame, double window_radius);
void write_frame_svg(const std::string& path, const RescaledFrame& frame, double window_radius);

} // namespace triodflow

#endif
