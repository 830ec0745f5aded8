#include "triodflow/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "triodflow/errors.hpp"

namespace triodflow {

namespace {

const char* kStrokeClasses[3] = {"c0", "c1", "c2"};

std::string num(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.6g", v);
    return buffer;
}

void open_svg(std::ostringstream& out, Vec2 lo, Vec2 hi) {
    const double margin = 0.05 * std::max(hi.x - lo.x, hi.y - lo.y) + 1e-9;
    lo -= {margin, margin};
    hi += {margin, margin};
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << num(lo.x) << ' '
        << num(-hi.y) << ' ' << num(hi.x - lo.x) << ' ' << num(hi.y - lo.y) << "\">\n"
        << "<style>\n"
        << ".domain{fill:none;stroke:#888;stroke-width:0.8%;}\n"
        << ".c0{fill:none;stroke:#d62728;stroke-width:0.6%;}\n"
        << ".c1{fill:none;stroke:#2ca02c;stroke-width:0.6%;}\n"
        << ".c2{fill:none;stroke:#1f77b4;stroke-width:0.6%;}\n"
        << ".junction{fill:#000;}\n"
        << ".ref{fill:none;stroke:#bbb;stroke-width:0.4%;stroke-dasharray:2,2;}\n"
        << "</style>\n";
}

// SVG y grows downward; emit with flipped y.
void polyline(std::ostringstream& out, const std::vector<Vec2>& pts, const char* cls) {
    out << "<polyline class=\"" << cls << "\" points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        if (i) out << ' ';
        out << num(pts[i].x) << ',' << num(-pts[i].y);
    }
    out << "\"/>\n";
}

void circle(std::ostringstream& out, const Vec2& c, double r, const char* cls) {
    out << "<circle class=\"" << cls << "\" cx=\"" << num(c.x) << "\" cy=\"" << num(-c.y)
        << "\" r=\"" << num(r) << "\"/>\n";
}

void domain_outline(std::ostringstream& out, const DomainShape& domain) {
    if (domain.kind() == DomainShape::Kind::Disc) {
        circle(out, domain.disc_center(), domain.disc_radius(), "domain");
        return;
    }
    std::vector<Vec2> ring = domain.vertices();
    ring.push_back(ring.front());
    polyline(out, ring, "domain");
}

void bounds_of(const std::vector<SampledCurve>& curves, Vec2& lo, Vec2& hi) {
    lo = {1e300, 1e300};
    hi = {-1e300, -1e300};
    for (const auto& curve : curves)
        for (const Vec2& p : curve.points) {
            lo.x = std::min(lo.x, p.x);
            lo.y = std::min(lo.y, p.y);
            hi.x = std::max(hi.x, p.x);
            hi.y = std::max(hi.y, p.y);
        }
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << text;
}

} // namespace

std::string curves_svg(const std::vector<SampledCurve>& curves,
                       const std::optional<DomainShape>& domain) {
    Vec2 lo, hi;
    if (domain) {
        domain->bounding_box(lo, hi);
    } else {
        bounds_of(curves, lo, hi);
    }
    std::ostringstream out;
    open_svg(out, lo, hi);
    if (domain) domain_outline(out, *domain);
    for (std::size_t i = 0; i < curves.size(); ++i)
        polyline(out, curves[i].points, kStrokeClasses[i % 3]);
    if (!curves.empty() && !curves.front().points.empty()) {
        const double marker = 0.012 * std::max(hi.x - lo.x, hi.y - lo.y);
        circle(out, curves.front().points.front(), marker, "junction");
    }
    out << "</svg>\n";
    return out.str();
}

std::string triod_svg(const Triod& triod) {
    return curves_svg({triod.curves.begin(), triod.curves.end()}, triod.domain);
}

void write_triod_svg(const std::string& path, const Triod& triod) {
    write_text(path, triod_svg(triod));
}

std::string frame_svg(const RescaledFrame& frame, double window_radius) {
    const Vec2 lo{-window_radius, -window_radius};
    const Vec2 hi{window_radius, window_radius};
    std::ostringstream out;
    open_svg(out, lo, hi);
    circle(out, {0.0, 0.0}, 1.0, "ref");
    polyline(out, {{-0.2, 0.0}, {0.2, 0.0}}, "ref");
    polyline(out, {{0.0, -0.2}, {0.0, 0.2}}, "ref");
    for (std::size_t i = 0; i < frame.curves.size(); ++i)
        polyline(out, frame.curves[i].points, kStrokeClasses[i % 3]);
    out << "</svg>\n";
    return out.str();
}

void write_frame_svg(const std::string& path, const RescaledFrame& frame,
                     double window_radius) {
    write_text(path, frame_svg(frame, window_radius));
}

} // namespace triodflow
