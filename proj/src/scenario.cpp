#include "triodflow/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "triodflow/errors.hpp"
#include "triodflow/io.hpp"
#include "triodflow/steiner.hpp"

namespace triodflow {

using nlohmann::json;

void ScenarioConfig::validate() const {
    solver.validate();
    const double scale = domain.scale();
    for (const Vec2& p : endpoints)
        if (!domain.on_boundary(p, 1e-7 * scale))
            throw ConfigError("endpoints must lie on the domain boundary");
    if (initial.type == InitialSpec::Type::Perturbed && initial.amplitude < 0.0)
        throw ConfigError("perturbation amplitude must be nonnegative");
    if (monitor.record_every < 1) throw ConfigError("record_every must be >= 1");
    for (const auto& probe : probes)
        if (!(probe.T_hat > 0.0)) throw ConfigError("probe T_hat must be positive");
}

namespace {

Vec2 parse_vec2(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(std::string(what) + " must be a [x, y] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

DomainShape parse_domain(const json& j) {
    const std::string kind = j.value("kind", "disc");
    if (kind == "disc") {
        return DomainShape::disc(parse_vec2(j.at("center"), "domain.center"),
                                 j.at("radius").get<double>());
    }
    if (kind == "convex-polygon") {
        std::vector<Vec2> verts;
        for (const auto& v : j.at("vertices")) verts.push_back(parse_vec2(v, "polygon vertex"));
        return DomainShape::convex_polygon(std::move(verts));
    }
    throw ConfigError("domain.kind must be disc or convex-polygon");
}

} // namespace

ScenarioConfig parse_scenario(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    try {
        ScenarioConfig config;
        config.domain = parse_domain(j.at("domain"));
        const auto& ends = j.at("endpoints");
        if (!ends.is_array() || ends.size() != 3)
            throw ConfigError("endpoints must list exactly 3 points");
        for (int i = 0; i < 3; ++i) config.endpoints[i] = parse_vec2(ends[i], "endpoint");

        const auto& init = j.at("initial");
        const std::string type = init.at("type").get<std::string>();
        if (type == "steiner-exact") {
            config.initial.type = InitialSpec::Type::SteinerExact;
        } else if (type == "perturbed") {
            config.initial.type = InitialSpec::Type::Perturbed;
            config.initial.amplitude = init.at("amplitude").get<double>();
            if (!init.contains("seed"))
                throw ConfigError("perturbed initial data requires a seed");
            config.initial.seed = init.at("seed").get<unsigned>();
            config.initial.symmetric = init.value("symmetric", false);
        } else if (type == "file") {
            config.initial.type = InitialSpec::Type::File;
            config.initial.path = init.at("path").get<std::string>();
        } else {
            throw ConfigError("initial.type must be steiner-exact, perturbed or file");
        }

        const auto& s = j.at("solver");
        config.solver.cfl = s.value("cfl", config.solver.cfl);
        config.solver.n_nodes = s.value("n_nodes", config.solver.n_nodes);
        config.solver.resample_every = s.value("resample_every", config.solver.resample_every);
        config.solver.t_max = s.at("t_max").get<double>();
        config.solver.eps_collapse = s.value("eps_collapse", config.solver.eps_collapse);
        config.solver.k2_blow = s.value("k2_blow", config.solver.k2_blow);
        config.solver.eps_steady = s.value("eps_steady", config.solver.eps_steady);
        config.solver.semi_implicit_dt_factor =
            s.value("semi_implicit_dt_factor", config.solver.semi_implicit_dt_factor);
        const std::string scheme = s.value("scheme", "semi-implicit");
        if (scheme == "explicit")
            config.solver.scheme = Scheme::Explicit;
        else if (scheme == "semi-implicit")
            config.solver.scheme = Scheme::SemiImplicit;
        else
            throw ConfigError("solver.scheme must be explicit or semi-implicit");

        for (const auto& probe : j.value("probes", json::array())) {
            KernelConfig kernel;
            kernel.x0 = parse_vec2(probe.at("x0"), "probe.x0");
            kernel.T_hat = probe.at("T_hat").get<double>();
            config.probes.push_back(kernel);
        }
        config.monitor.record_every = j.value("record_every", config.monitor.record_every);
        config.monitor.snapshot_every = j.value("snapshot_every", config.monitor.snapshot_every);
        config.monitor.e_pair_budget = j.value("e_pair_budget", config.monitor.e_pair_budget);
        config.output_dir = j.value("output_dir", config.output_dir);
        config.validate();
        return config;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid scenario config: ") + e.what());
    }
}

ScenarioConfig load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str());
}

std::string scenario_to_json(const ScenarioConfig& config) {
    json j;
    if (config.domain.kind() == DomainShape::Kind::Disc) {
        j["domain"] = {{"kind", "disc"},
                       {"center", {config.domain.disc_center().x, config.domain.disc_center().y}},
                       {"radius", config.domain.disc_radius()}};
    } else {
        json verts = json::array();
        for (const Vec2& v : config.domain.vertices()) verts.push_back({v.x, v.y});
        j["domain"] = {{"kind", "convex-polygon"}, {"vertices", verts}};
    }
    json ends = json::array();
    for (const Vec2& p : config.endpoints) ends.push_back({p.x, p.y});
    j["endpoints"] = ends;
    switch (config.initial.type) {
        case InitialSpec::Type::SteinerExact:
            j["initial"] = {{"type", "steiner-exact"}};
            break;
        case InitialSpec::Type::Perturbed:
            j["initial"] = {{"type", "perturbed"},
                            {"amplitude", config.initial.amplitude},
                            {"seed", config.initial.seed},
                            {"symmetric", config.initial.symmetric}};
            break;
        case InitialSpec::Type::File:
            j["initial"] = {{"type", "file"}, {"path", config.initial.path}};
            break;
    }
    j["solver"] = {{"cfl", config.solver.cfl},
                   {"n_nodes", config.solver.n_nodes},
                   {"resample_every", config.solver.resample_every},
                   {"t_max", config.solver.t_max},
                   {"eps_collapse", config.solver.eps_collapse},
                   {"k2_blow", config.solver.k2_blow},
                   {"eps_steady", config.solver.eps_steady},
                   {"semi_implicit_dt_factor", config.solver.semi_implicit_dt_factor},
                   {"scheme", config.solver.scheme == Scheme::Explicit ? "explicit"
                                                                       : "semi-implicit"}};
    json probes = json::array();
    for (const auto& probe : config.probes)
        probes.push_back({{"x0", {probe.x0.x, probe.x0.y}}, {"T_hat", probe.T_hat}});
    j["probes"] = probes;
    j["record_every"] = config.monitor.record_every;
    j["snapshot_every"] = config.monitor.snapshot_every;
    j["e_pair_budget"] = config.monitor.e_pair_budget;
    j["output_dir"] = config.output_dir;
    return j.dump(2);
}

namespace {

std::array<Vec2, 3> circle_points(double radius, std::array<double, 3> degrees) {
    std::array<Vec2, 3> out;
    for (int i = 0; i < 3; ++i) {
        const double a = degrees[i] * M_PI / 180.0;
        out[i] = {radius * std::cos(a), radius * std::sin(a)};
    }
    return out;
}

} // namespace

std::vector<std::string> preset_names() {
    return {"equilateral", "perturbed", "symmetric3", "obtuse150"};
}

std::optional<ScenarioConfig> preset_scenario(const std::string& name) {
    ScenarioConfig config;
    config.domain = DomainShape::disc({0.0, 0.0}, 1.0);
    config.solver.n_nodes = 64;
    config.solver.t_max = 5.0;
    config.monitor.record_every = 20;
    if (name == "equilateral") {
        config.endpoints = circle_points(1.0, {90.0, 210.0, 330.0});
        config.initial.type = InitialSpec::Type::SteinerExact;
        config.probes = {{{0.0, 0.0}, 50.0}};
        config.output_dir = "out_equilateral";
        return config;
    }
    if (name == "perturbed") {
        config.endpoints = circle_points(1.0, {90.0, 210.0, 330.0});
        config.initial = {InitialSpec::Type::Perturbed, 0.1, 7, false, ""};
        config.probes = {{{0.0, 0.0}, 50.0}, {{0.3, 0.2}, 50.0}, {{-0.4, 0.1}, 50.0}};
        config.output_dir = "out_perturbed";
        return config;
    }
    if (name == "symmetric3") {
        config.endpoints = circle_points(1.0, {90.0, 210.0, 330.0});
        config.initial = {InitialSpec::Type::Perturbed, 0.05, 3, true, ""};
        config.probes = {{{0.0, 0.0}, 50.0}};
        config.output_dir = "out_symmetric3";
        return config;
    }
    if (name == "obtuse150") {
        // Inscribed angle of 150 degrees at the endpoint on the 100 degree ray.
        config.endpoints = circle_points(1.0, {100.0, 70.0, 130.0});
        config.initial = {InitialSpec::Type::Perturbed, 0.0, 1, false, ""};
        config.solver.t_max = 2.0;
        config.monitor.record_every = 10;
        // The collapse lands at t ~ 0.040 with the junction absorbed at the
        // wide vertex; horizons follow the 1.05 x final-time rule.
        const Vec2 wide{std::cos(100.0 * M_PI / 180.0), std::sin(100.0 * M_PI / 180.0)};
        config.probes = {{wide, 0.042}, {{0.0, 0.6}, 0.042}, {{-0.2, 0.9}, 0.042}};
        config.output_dir = "out_obtuse150";
        return config;
    }
    return std::nullopt;
}

namespace {

// Counterclockwise relabeling by leg angle at the junction.
void sort_counterclockwise(std::array<Vec2, 3>& endpoints, const Vec2& junction) {
    std::array<int, 3> order{0, 1, 2};
    std::array<double, 3> angle;
    for (int i = 0; i < 3; ++i) {
        const Vec2 d = endpoints[i] - junction;
        angle[i] = std::atan2(d.y, d.x);
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) { return angle[a] < angle[b]; });
    std::array<Vec2, 3> sorted;
    for (int i = 0; i < 3; ++i) sorted[i] = endpoints[order[i]];
    endpoints = sorted;
}

} // namespace

Triod build_initial_triod(const ScenarioConfig& config) {
    config.validate();
    const std::size_t n = config.solver.n_nodes;

    Triod triod;
    triod.domain = config.domain;

    if (config.initial.type == InitialSpec::Type::File) {
        auto curves = read_node_list(config.initial.path);
        if (curves.size() != 3) throw ConfigError("node file must contain 3 curves");
        for (int i = 0; i < 3; ++i) {
            triod.curves[i] = curves[i];
            triod.endpoints[i] = curves[i].points.back();
        }
        enforce_junction(triod, 1e-9, 100);
        return triod;
    }

    // Junction seed: the Fermat point when interior, the centroid otherwise.
    std::array<Vec2, 3> endpoints = config.endpoints;
    Vec2 junction = (endpoints[0] + endpoints[1] + endpoints[2]) / 3.0;
    const SteinerSolution sol = fermat_point(endpoints[0], endpoints[1], endpoints[2]);
    if (sol.kind == SteinerSolution::Kind::Interior) junction = sol.fermat;
    sort_counterclockwise(endpoints, junction);
    triod.endpoints = endpoints;

    if (sol.kind == SteinerSolution::Kind::Interior) {
        for (int i = 0; i < 3; ++i) triod.curves[i] = make_segment(junction, endpoints[i], n);
    } else {
        // A wide-angle endpoint triangle has no straight-leg 120 degree
        // configuration; bend the arms with quadratic Bezier legs whose
        // junction tangents are spaced at exactly 120 degrees, oriented by
        // the circular mean of the endpoint directions.
        Vec2 mean{0.0, 0.0};
        for (int i = 0; i < 3; ++i) {
            const Vec2 u = (endpoints[i] - junction).normalized();
            const double shifted = std::atan2(u.y, u.x) - 2.0 * M_PI * i / 3.0;
            mean += Vec2{std::cos(shifted), std::sin(shifted)};
        }
        const double base_angle = std::atan2(mean.y, mean.x);
        for (int i = 0; i < 3; ++i) {
            const double w = base_angle + 2.0 * M_PI * i / 3.0;
            const Vec2 control =
                junction + Vec2{std::cos(w), std::sin(w)} * (dist(endpoints[i], junction) / 3.0);
            SampledCurve curve;
            curve.points.resize(n + 1);
            for (std::size_t jn = 0; jn <= n; ++jn) {
                const double t = static_cast<double>(jn) / static_cast<double>(n);
                curve.points[jn] = junction * ((1.0 - t) * (1.0 - t)) +
                                   control * (2.0 * t * (1.0 - t)) + endpoints[i] * (t * t);
            }
            triod.curves[i] = curve;
        }
    }

    if (config.initial.type == InitialSpec::Type::Perturbed && config.initial.amplitude > 0.0) {
        std::mt19937 rng(config.initial.seed);
        std::uniform_real_distribution<double> uniform(-1.0, 1.0);
        std::array<std::array<double, 3>, 3> modes;
        for (int i = 0; i < 3; ++i)
            for (int m = 0; m < 3; ++m)
                modes[i][m] = (config.initial.symmetric && i > 0) ? modes[0][m] : uniform(rng);
        // Modes sin(pi x) sin(m pi x) vanish to first order at both ends,
        // so the junction balance and the anchoring stay exact.
        for (int i = 0; i < 3; ++i) {
            const Vec2 normal = (endpoints[i] - junction).normalized().perp();
            auto& pts = triod.curves[i].points;
            for (std::size_t jn = 1; jn < pts.size() - 1; ++jn) {
                const double x = static_cast<double>(jn) / static_cast<double>(n);
                double bump = 0.0;
                for (int m = 0; m < 3; ++m)
                    bump += modes[i][m] / static_cast<double>(m + 1) * std::sin(M_PI * x) *
                            std::sin((m + 1) * M_PI * x);
                pts[jn] += normal * (config.initial.amplitude * bump);
            }
        }
    }

    enforce_junction(triod, 1e-9, 100);
    for (auto& curve : triod.curves) curve = resample_arclength(curve, n);
    enforce_junction(triod, 1e-9, 100);
    return triod;
}

} // namespace triodflow
