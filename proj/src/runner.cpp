#include "triodflow/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "triodflow/io.hpp"
#include "triodflow/steiner.hpp"
#include "triodflow/svg.hpp"

namespace triodflow {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string snapshot_name(long index) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "snap_%06ld", index);
    return buffer;
}

void write_outputs(const ScenarioConfig& config, const RunResult& result,
                   const std::string& out_dir) {
    fs::create_directories(out_dir);
    fs::create_directories(out_dir + "/snapshots");
    write_monitor_csv(out_dir + "/monitors.csv", result.series, config.probes.size());
    write_final_state_json(out_dir + "/final_state.json", config, result);
    std::vector<std::pair<std::string, double>> index;
    for (std::size_t i = 0; i < result.snapshots.size(); ++i) {
        const std::string base = snapshot_name(static_cast<long>(i));
        const auto& snap = result.snapshots[i];
        std::vector<SampledCurve> curves(snap.triod.curves.begin(), snap.triod.curves.end());
        write_node_list(out_dir + "/snapshots/" + base + ".txt", curves);
        write_triod_svg(out_dir + "/snapshots/" + base + ".svg", snap.triod);
        index.emplace_back(base + ".txt", snap.t);
    }
    write_snapshot_index(out_dir + "/snapshots/index.csv", index);
}

} // namespace

int cli_run(const std::string& config_or_preset, const std::string& output_override,
            std::ostream& out, std::ostream& err) {
    ScenarioConfig config;
    try {
        if (auto preset = preset_scenario(config_or_preset)) {
            config = *preset;
        } else {
            config = load_scenario_file(config_or_preset);
        }
        if (!output_override.empty()) config.output_dir = output_override;
    } catch (const std::exception& e) {
        err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        const Triod initial = build_initial_triod(config);
        const RunResult result = run(initial, config.solver, config.probes, config.monitor);
        write_outputs(config, result, config.output_dir);
        out << "stop: " << result.reason.name() << " t=" << format_double(result.final_state.t)
            << " steps=" << result.final_state.step_index
            << " records=" << result.series.size()
            << " projections=" << result.final_state.projection_count << "\n";
        return kExitOk;
    } catch (const RunAborted& e) {
        err << "solver error: " << e.what() << "\n";
        try {
            write_outputs(config, e.partial, config.output_dir);
            err << "partial series written to " << config.output_dir << "\n";
        } catch (const std::exception& io_err) {
            err << "could not write partial outputs: " << io_err.what() << "\n";
        }
        return kExitSolver;
    } catch (const std::exception& e) {
        err << "solver error: " << e.what() << "\n";
        return kExitSolver;
    }
}

int cli_blowup(const std::string& run_dir, const Vec2& x0, double T_hat,
               double window_radius, std::ostream& out, std::ostream& err) {
    try {
        const std::string index_path = run_dir + "/snapshots/index.csv";
        if (!fs::exists(index_path)) {
            err << "no snapshot index under " << run_dir << "\n";
            return kExitConfig;
        }
        const auto index = read_snapshot_index(index_path);
        std::ostringstream frames_csv;
        frames_csv << "frak_t,density,integrand,class,fit_residual\n";
        int written = 0;
        for (const auto& [file, t] : index) {
            if (!(t < T_hat)) continue;
            const auto curves = read_node_list(run_dir + "/snapshots/" + file);
            FlowState state;
            state.t = t;
            if (curves.size() != 3) throw Error("snapshot must contain 3 curves");
            for (int i = 0; i < 3; ++i) {
                state.triod.curves[i] = curves[i];
                state.triod.endpoints[i] = curves[i].points.back();
            }
            const RescaledFrame frame = rescale_frame(state, x0, T_hat);
            const BlowupClass cls = classify_blowup(frame, window_radius);
            frames_csv << format_double(frame.frak_t) << ','
                       << format_double(rescaled_density(frame)) << ','
                       << format_double(rescaled_monotonicity_integrand(frame)) << ','
                       << cls.name() << ',' << format_double(cls.fit_residual) << '\n';
            write_frame_svg(run_dir + "/frames_" + file.substr(0, file.size() - 4) + ".svg",
                            frame, window_radius);
            ++written;
        }
        std::ofstream fcsv(run_dir + "/frames.csv", std::ios::binary);
        fcsv << frames_csv.str();
        out << "frames: " << written << " written to " << run_dir << "/frames.csv\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "blowup error: " << e.what() << "\n";
        return kExitConfig;
    }
}

int cli_steiner(const Vec2& p1, const Vec2& p2, const Vec2& p3, std::ostream& out,
                std::ostream& err) {
    try {
        const SteinerSolution sol = fermat_point(p1, p2, p3);
        json j;
        if (sol.kind == SteinerSolution::Kind::Interior) {
            j["kind"] = "interior";
            j["fermat"] = {sol.fermat.x, sol.fermat.y};
        } else {
            j["kind"] = "degenerate";
            j["vertex"] = sol.degenerate_vertex;
        }
        j["total_length"] = sol.total_length;
        json segs = json::array();
        for (const auto& seg : sol.segments)
            segs.push_back({{seg[0].x, seg[0].y}, {seg[1].x, seg[1].y}});
        j["segments"] = segs;
        out << j.dump(2) << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "steiner error: " << e.what() << "\n";
        return kExitConfig;
    }
}

int cli_render(const std::string& state_path, const std::string& svg_path,
               std::ostream& out, std::ostream& err) {
    try {
        std::vector<SampledCurve> curves;
        std::optional<DomainShape> domain;
        if (state_path.size() > 5 && state_path.substr(state_path.size() - 5) == ".json") {
            std::ifstream in(state_path);
            if (!in) throw Error("cannot open state file: " + state_path);
            json j = json::parse(in);
            for (const auto& jc : j.at("curves")) {
                SampledCurve curve;
                for (const auto& jp : jc)
                    curve.points.push_back({jp[0].get<double>(), jp[1].get<double>()});
                curves.push_back(std::move(curve));
            }
            const auto& jd = j.at("config").at("domain");
            if (jd.at("kind") == "disc") {
                domain = DomainShape::disc(
                    {jd.at("center")[0].get<double>(), jd.at("center")[1].get<double>()},
                    jd.at("radius").get<double>());
            } else {
                std::vector<Vec2> verts;
                for (const auto& v : jd.at("vertices"))
                    verts.push_back({v[0].get<double>(), v[1].get<double>()});
                domain = DomainShape::convex_polygon(std::move(verts));
            }
        } else {
            curves = read_node_list(state_path);
        }
        std::ofstream svg(svg_path, std::ios::binary);
        if (!svg) throw Error("cannot write svg: " + svg_path);
        svg << curves_svg(curves, domain);
        out << "rendered " << state_path << " -> " << svg_path << "\n";
        return kExitOk;
    } catch (const std::exception& e) {
        err << "render error: " << e.what() << "\n";
        return kExitConfig;
    }
}

} // namespace triodflow
