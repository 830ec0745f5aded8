#include "triodflow/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "triodflow/errors.hpp"

namespace triodflow {

using nlohmann::json;

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::string monitor_csv(const std::vector<MonitorRecord>& series, std::size_t n_probes) {
    std::ostringstream out;
    out << "t,L1,L2,L3,L,k2_int,k_sup";
    for (std::size_t p = 0; p < n_probes; ++p)
        out << ",theta_" << p << ",b_rate_" << p;
    out << ",E,Ox,Oy,res_angle,res_sumk,res_sumlambda\n";
    for (const auto& rec : series) {
        out << format_double(rec.t) << ',' << format_double(rec.lengths.l1) << ','
            << format_double(rec.lengths.l2) << ',' << format_double(rec.lengths.l3) << ','
            << format_double(rec.lengths.total) << ',' << format_double(rec.k2_int) << ','
            << format_double(rec.k_sup);
        for (std::size_t p = 0; p < n_probes; ++p)
            out << ',' << format_double(rec.theta.at(p)) << ','
                << format_double(rec.b_rate.at(p));
        out << ',' << format_double(rec.embeddedness) << ',' << format_double(rec.junction.x)
            << ',' << format_double(rec.junction.y) << ','
            << format_double(rec.residuals.angle) << ',' << format_double(rec.residuals.sum_k)
            << ',' << format_double(rec.residuals.sum_lambda) << '\n';
    }
    return out.str();
}

namespace {

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << text;
}

} // namespace

void write_monitor_csv(const std::string& path, const std::vector<MonitorRecord>& series,
                       std::size_t n_probes) {
    write_text(path, monitor_csv(series, n_probes));
}

std::string node_list_text(const std::vector<SampledCurve>& curves) {
    std::ostringstream out;
    for (std::size_t i = 0; i < curves.size(); ++i)
        for (std::size_t j = 0; j < curves[i].points.size(); ++j)
            out << i << ' ' << j << ' ' << format_double(curves[i].points[j].x) << ' '
                << format_double(curves[i].points[j].y) << '\n';
    return out.str();
}

void write_node_list(const std::string& path, const std::vector<SampledCurve>& curves) {
    write_text(path, node_list_text(curves));
}

std::vector<SampledCurve> read_node_list(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open node list: " + path);
    std::vector<SampledCurve> curves;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::size_t curve, node;
        double x, y;
        if (!(row >> curve >> node >> x >> y))
            throw Error("malformed node list row: " + line);
        if (curve >= curves.size()) curves.resize(curve + 1);
        if (node != curves[curve].points.size())
            throw Error("node list rows out of order");
        curves[curve].points.push_back({x, y});
    }
    return curves;
}

void write_final_state_json(const std::string& path, const ScenarioConfig& config,
                            const RunResult& result) {
    json j;
    j["t"] = result.final_state.t;
    j["step_index"] = result.final_state.step_index;
    j["dt_last"] = result.final_state.dt_last;
    j["projection_count"] = result.final_state.projection_count;
    j["reason"] = result.reason.name();
    if (result.reason.kind == StopReason::Kind::LengthCollapse)
        j["collapsed_curve"] = result.reason.curve;
    j["junction"] = {result.final_state.triod.junction().x,
                     result.final_state.triod.junction().y};
    json ends = json::array();
    for (const Vec2& p : result.final_state.triod.endpoints) ends.push_back({p.x, p.y});
    j["endpoints"] = ends;
    json curves = json::array();
    for (const auto& curve : result.final_state.triod.curves) {
        json pts = json::array();
        for (const Vec2& p : curve.points) pts.push_back({p.x, p.y});
        curves.push_back(pts);
    }
    j["curves"] = curves;
    j["config"] = json::parse(scenario_to_json(config));
    write_text(path, j.dump(2) + "\n");
}

void write_snapshot_index(const std::string& path,
                          const std::vector<std::pair<std::string, double>>& entries) {
    std::ostringstream out;
    out << "file,t\n";
    for (const auto& [file, t] : entries) out << file << ',' << format_double(t) << '\n';
    write_text(path, out.str());
}

std::vector<std::pair<std::string, double>> read_snapshot_index(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open snapshot index: " + path);
    std::vector<std::pair<std::string, double>> entries;
    std::string line;
    std::getline(in, line); // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw Error("malformed index row: " + line);
        entries.emplace_back(line.substr(0, comma), std::stod(line.substr(comma + 1)));
    }
    return entries;
}

} // namespace triodflow
