#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "triodflow/accept.hpp"
#include "triodflow/runner.hpp"

namespace {

bool parse_point(const std::string& text, triodflow::Vec2& out) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) return false;
    try {
        out.x = std::stod(text.substr(0, comma));
        out.y = std::stod(text.substr(comma + 1));
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"triodflow: curvature flow of planar triods with singularity monitors"};
    app.require_subcommand(1);

    std::string run_config, run_out;
    CLI::App* cmd_run = app.add_subcommand("run", "run a scenario config or preset");
    cmd_run->add_option("config", run_config, "config file path or preset name")->required();
    cmd_run->add_option("--out", run_out, "override the output directory");

    std::string blowup_dir, blowup_x0;
    double blowup_T = 0.0, blowup_window = 4.0;
    CLI::App* cmd_blowup = app.add_subcommand("blowup", "rescale the snapshots of a run");
    cmd_blowup->add_option("dir", blowup_dir, "run output directory")->required();
    cmd_blowup->add_option("--x0", blowup_x0, "blow-up center X,Y")->required();
    cmd_blowup->add_option("--T", blowup_T, "reference singular time")->required();
    cmd_blowup->add_option("--window", blowup_window, "classification window radius");

    std::vector<std::string> steiner_points;
    CLI::App* cmd_steiner = app.add_subcommand("steiner", "Fermat point of three endpoints");
    cmd_steiner->add_option("points", steiner_points, "three points X,Y")
        ->expected(3)
        ->required();

    std::string render_state, render_svg;
    CLI::App* cmd_render = app.add_subcommand("render", "render a state file to SVG");
    cmd_render->add_option("state", render_state, "final_state.json or snapshot .txt")
        ->required();
    cmd_render->add_option("svg", render_svg, "output SVG path")->required();

    std::string check_suite;
    CLI::App* cmd_check = app.add_subcommand("check", "run the acceptance suite");
    cmd_check->add_option("suite", check_suite, "fast or full")->required();

    CLI11_PARSE(app, argc, argv);

    if (cmd_run->parsed())
        return triodflow::cli_run(run_config, run_out, std::cout, std::cerr);

    if (cmd_blowup->parsed()) {
        triodflow::Vec2 x0;
        if (!parse_point(blowup_x0, x0)) {
            std::cerr << "invalid --x0, expected X,Y\n";
            return triodflow::kExitConfig;
        }
        return triodflow::cli_blowup(blowup_dir, x0, blowup_T, blowup_window, std::cout,
                                     std::cerr);
    }

    if (cmd_steiner->parsed()) {
        triodflow::Vec2 p[3];
        for (int i = 0; i < 3; ++i) {
            if (!parse_point(steiner_points[i], p[i])) {
                std::cerr << "invalid point '" << steiner_points[i] << "', expected X,Y\n";
                return triodflow::kExitConfig;
            }
        }
        return triodflow::cli_steiner(p[0], p[1], p[2], std::cout, std::cerr);
    }

    if (cmd_render->parsed())
        return triodflow::cli_render(render_state, render_svg, std::cout, std::cerr);

    if (cmd_check->parsed()) {
        if (check_suite != "fast" && check_suite != "full") {
            std::cerr << "unknown suite '" << check_suite << "', expected fast or full\n";
            return triodflow::kExitConfig;
        }
        const auto results = triodflow::accept::run_suite(check_suite);
        const bool ok = triodflow::accept::print_results(results, std::cout);
        return ok ? triodflow::kExitOk : triodflow::kExitCheckFailed;
    }

    return triodflow::kExitConfig;
}
