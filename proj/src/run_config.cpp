#include "mmcf/run_config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "mmcf/expression.hpp"

namespace mmcf {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& s) {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (trim(s.substr(used)) != "") throw InvalidArgument("not a number: '" + s + "'");
    if (!std::isfinite(v)) throw InvalidArgument("not finite: '" + s + "'");
    return v;
}

int to_int(const std::string& s) {
    const double v = to_double(s);
    if (v != std::floor(v)) throw InvalidArgument("not an integer: '" + s + "'");
    return static_cast<int>(v);
}

std::vector<double> to_list(const std::string& s) {
    std::vector<double> out;
    std::string item;
    std::stringstream ss(s);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(to_double(item));
    }
    if (out.empty()) throw InvalidArgument("empty list");
    return out;
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table{
        {"command", [](RunConfig& c, const std::string& v) { c.command = parse_command(v); }},
        {"n", [](RunConfig& c, const std::string& v) { c.n = to_int(v); }},
        {"mode",
         [](RunConfig& c, const std::string& v) {
             if (v == "full") c.mode = GridMode::full;
             else if (v == "axisymmetric") c.mode = GridMode::axisymmetric;
             else throw InvalidArgument("mode must be full or axisymmetric");
         }},
        {"resolution", [](RunConfig& c, const std::string& v) { c.resolution = to_int(v); }},
        {"azimuth_nodes", [](RunConfig& c, const std::string& v) { c.azimuth_nodes = to_int(v); }},
        {"theta_max", [](RunConfig& c, const std::string& v) { c.theta_max = to_double(v); }},
        {"sigma", [](RunConfig& c, const std::string& v) { c.sigma = to_double(v); }},
        {"rhs_mode",
         [](RunConfig& c, const std::string& v) {
             if (v == "parametric") c.rhs_mode = RhsMode::parametric;
             else if (v == "normalized") c.rhs_mode = RhsMode::normalized;
             else throw InvalidArgument("rhs_mode must be parametric or normalized");
         }},
        {"normalization",
         [](RunConfig& c, const std::string& v) {
             if (v == "1/n") c.normalization = -1.0;  // resolved against n in parse_config
             else c.normalization = to_double(v);
         }},
        {"cfl", [](RunConfig& c, const std::string& v) { c.cfl = to_double(v); }},
        {"T", [](RunConfig& c, const std::string& v) { c.T = to_double(v); }},
        {"cadence", [](RunConfig& c, const std::string& v) { c.cadence = to_double(v); }},
        {"epsilon", [](RunConfig& c, const std::string& v) { c.epsilon = to_double(v); }},
        {"schedule", [](RunConfig& c, const std::string& v) { c.schedule = to_list(v); }},
        {"boundary_policy",
         [](RunConfig& c, const std::string& v) {
             if (v == "frozen") c.boundary_policy = BoundaryPolicy::frozen;
             else if (v == "prescribed") c.boundary_policy = BoundaryPolicy::prescribed;
             else throw InvalidArgument("boundary_policy must be frozen or prescribed");
         }},
        {"initial", [](RunConfig& c, const std::string& v) { c.initial = v; }},
        {"output_dir", [](RunConfig& c, const std::string& v) { c.output_dir = v; }},
        {"radius", [](RunConfig& c, const std::string& v) { c.radius = to_double(v); }},
        {"c0", [](RunConfig& c, const std::string& v) { c.c0 = to_double(v); }},
        {"slope", [](RunConfig& c, const std::string& v) { c.slope = to_double(v); }},
        {"perturbation", [](RunConfig& c, const std::string& v) { c.perturbation = to_double(v); }},
        {"cosh_R", [](RunConfig& c, const std::string& v) { c.cosh_R = to_double(v); }},
        {"cutoff_theta", [](RunConfig& c, const std::string& v) { c.cutoff_theta = to_double(v); }},
        {"mollify_scale", [](RunConfig& c, const std::string& v) { c.mollify_scale = to_double(v); }},
        {"w_cap", [](RunConfig& c, const std::string& v) { c.w_cap = to_double(v); }},
        {"margin", [](RunConfig& c, const std::string& v) { c.margin = to_double(v); }},
        {"pole_margin", [](RunConfig& c, const std::string& v) { c.pole_margin = to_double(v); }},
        {"tolerance", [](RunConfig& c, const std::string& v) { c.tolerance = to_double(v); }},
        {"seed",
         [](RunConfig& c, const std::string& v) {
             const int s = to_int(v);
             if (s < 0) throw InvalidArgument("seed must be non-negative");
             c.seed = static_cast<std::uint64_t>(s);
         }},
    };
    return table;
}

}  // namespace

Command parse_command(const std::string& name) {
    if (name == "simulate") return Command::simulate;
    if (name == "verify") return Command::verify;
    if (name == "exhaust") return Command::exhaust;
    if (name == "barriers") return Command::barriers;
    if (name == "convergence") return Command::convergence;
    throw InvalidArgument("unknown command '" + name + "'");
}

std::string to_string(Command c) {
    switch (c) {
        case Command::simulate: return "simulate";
        case Command::verify: return "verify";
        case Command::exhaust: return "exhaust";
        case Command::barriers: return "barriers";
        case Command::convergence: return "convergence";
    }
    return "simulate";
}

GridSpec RunConfig::grid_spec() const {
    GridSpec s;
    s.dim = n;
    s.mode = n == 1 ? GridMode::full : mode;
    s.polar_nodes = resolution;
    s.azimuth_nodes = azimuth_nodes > 0 ? azimuth_nodes : std::max(8, 2 * (resolution - 1));
    s.theta_max = theta_max;
    return s;
}

FlowConfig RunConfig::flow_config(const Grid& g) const {
    FlowConfig f;
    f.sigma = sigma;
    f.rhs_mode = rhs_mode;
    f.normalization = normalization;
    f.cfl = cfl;
    f.T = T;
    f.cadence = cadence;
    f.epsilon = epsilon;
    f.boundary_policy = boundary_policy;
    f.w_cap = w_cap;
    if (boundary_policy == BoundaryPolicy::prescribed) {
        if (initial != "horosphere") throw InvalidArgument("boundary_policy=prescribed requires initial=horosphere");
        const Field v0 = horosphere_field(c0, 0.0, sigma, g);
        const double speed = n - sigma;
        f.boundary_data = [v0, speed](std::size_t i, double t) { return v0[i] + speed * t; };
    }
    return f;
}

BarrierSpec RunConfig::barrier_spec() const {
    BarrierSpec b;
    b.kind = parse_barrier_kind(initial == "perturbed_cap" ? "cap" : initial);
    b.c0 = c0;
    b.r = radius;
    b.sigma = sigma;
    b.n = n;
    return b;
}

CutoffParams RunConfig::cutoff_params() const {
    CutoffParams p;
    p.cosh_R = cosh_R;
    p.theta = cutoff_theta;
    p.T = T;
    p.sigma = sigma;
    p.n = n;
    return p;
}

void RunConfig::validate() const {
    if (n != 1 && n != 2) throw InvalidArgument("n must be 1 or 2");
    if (!(std::abs(sigma) < n)) throw InvalidArgument("sigma must satisfy |sigma| < n");
    grid_spec().validate();
    FlowConfig f;
    f.sigma = sigma;
    f.rhs_mode = rhs_mode;
    f.normalization = normalization;
    f.cfl = cfl;
    f.T = T;
    f.cadence = cadence;
    f.epsilon = epsilon;
    f.w_cap = w_cap;
    f.validate(n);
    if (command == Command::exhaust) {
        if (schedule.empty()) throw InvalidArgument("exhaust requires a schedule");
        mmcf::schedule(schedule, n, sigma);
    }
    if (mollify_scale < 0.0) throw InvalidArgument("mollify_scale must be non-negative");
    if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
    if (radius <= 0.0 || c0 <= 0.0) throw InvalidArgument("radius and c0 must be positive");
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::map<std::string, int> seen;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool normalization_1n = false;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw InvalidArgument("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end())
            throw InvalidArgument("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (seen.count(key))
            throw InvalidArgument("line " + std::to_string(lineno) + ": duplicate key '" + key + "' (first on line " +
                                  std::to_string(seen[key]) + ")");
        seen[key] = lineno;
        try {
            it->second(cfg, value);
        } catch (const std::exception& e) {
            throw InvalidArgument("line " + std::to_string(lineno) + ": " + key + ": " + e.what());
        }
        if (key == "normalization" && value == "1/n") normalization_1n = true;
        cfg.entries[key] = value;
    }
    if (normalization_1n) cfg.normalization = 1.0 / cfg.n;
    try {
        cfg.validate();
    } catch (const std::exception& e) {
        std::string where;
        for (const char* key : {"sigma", "n", "schedule", "normalization", "cfl", "T", "resolution", "theta_max"}) {
            if (std::string(e.what()).find(key) != std::string::npos && seen.count(key)) {
                where = "line " + std::to_string(seen[key]) + ": ";
                break;
            }
        }
        throw InvalidArgument(where + e.what());
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw InvalidArgument("cannot read config '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

void apply_resolution_override(RunConfig& cfg, int k) {
    if (k < 0 || k > 6) throw InvalidArgument("resolution override must be in [0, 6]");
    cfg.resolution = (cfg.resolution - 1) * (1 << k) + 1;
    if (cfg.azimuth_nodes > 0) cfg.azimuth_nodes *= (1 << k);
    cfg.entries["resolution"] = std::to_string(cfg.resolution);
    cfg.validate();
}

namespace {

double polar_angle(const Grid& g, std::size_t i) {
    return g.dim() == 1 ? std::abs(g.coords(i)[0]) : g.coords(i)[0];
}

Field read_field_file(const std::string& path, const Grid& g) {
    std::ifstream f(path);
    if (!f) throw InvalidArgument("cannot read initial data '" + path + "'");
    Field v(g.size(), std::nan(""));
    std::string line;
    std::size_t next = 0;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#' || std::isalpha(static_cast<unsigned char>(line[0]))) continue;
        try {
            const auto comma = line.find(',');
            if (comma == std::string::npos) {
                if (next >= v.size()) throw InvalidArgument("too many values");
                v[next++] = to_double(line);
            } else {
                const int id = to_int(line.substr(0, comma));
                if (id < 0 || static_cast<std::size_t>(id) >= v.size()) throw InvalidArgument("node id out of range");
                v[static_cast<std::size_t>(id)] = to_double(line.substr(comma + 1));
            }
        } catch (const std::exception& e) {
            throw InvalidArgument(path + " line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    for (double x : v)
        if (!std::isfinite(x)) throw InvalidArgument(path + ": missing node values");
    return v;
}

/// Smooth deterministic perturbation sum_k a_k cos(k pi zeta / theta_max) (+ b_k cos(k phi) terms
/// in full mode), zeta the polar angle, with coefficients drawn from the seed.
Field perturbation_field(const RunConfig& cfg, const Grid& g) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::array<double, 3> a{}, b{};
    for (auto& x : a) x = coef(rng);
    for (auto& x : b) x = coef(rng);
    const double norm = std::abs(a[0]) + std::abs(a[1]) + std::abs(a[2]) + (g.full2d() ? 1.0 : 0.0);
    Field p(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double zeta = g.coords(i)[0];
        double s = 0.0;
        for (int k = 0; k < 3; ++k) s += a[k] * std::cos((k + 1) * M_PI * zeta / (2.0 * g.spec().theta_max));
        if (g.full2d()) {
            double az = 0.0;
            for (int k = 0; k < 3; ++k) az += b[k] * std::cos((k + 1) * g.coords(i)[1]);
            s += std::sin(zeta) * std::sin(zeta) * az / 3.0;
        }
        p[i] = cfg.perturbation * s / norm;
    }
    return p;
}

}  // namespace

Field initial_field(const RunConfig& cfg, const Grid& g) {
    Field v;
    const std::string& init = cfg.initial;
    if (init == "hemisphere" || init == "horosphere" || init == "cap") {
        v = barrier_field(cfg.barrier_spec(), g, 0.0);
    } else if (init == "perturbed_cap") {
        v = barrier_field(cfg.barrier_spec(), g, 0.0);
        const Field p = perturbation_field(cfg, g);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] += p[i];
    } else if (init == "cone") {
        v.resize(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) v[i] = std::log(cfg.radius) - cfg.slope * polar_angle(g, i);
    } else if (init.rfind("file:", 0) == 0) {
        v = read_field_file(init.substr(5), g);
    } else {
        const Expression expr(init);
        v.resize(g.size());
        std::map<std::string, double> vars;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto& z = g.z(i);
            vars["s"] = g.coords(i)[0];
            vars["theta"] = g.dim() == 1 ? std::abs(g.coords(i)[0]) : g.coords(i)[0];
            vars["phi"] = g.dim() == 1 ? 0.0 : g.coords(i)[1];
            vars["y"] = g.y(i);
            vars["z1"] = z[0];
            vars["z2"] = z[1];
            vars["z3"] = z[2];
            v[i] = expr.evaluate(vars);
            if (!std::isfinite(v[i])) throw InvalidArgument("initial expression is not finite at node " + std::to_string(i));
        }
    }
    if (cfg.mollify_scale > 0.0) v = mollify(v, cfg.mollify_scale, g);
    return v;
}

}  // namespace mmcf
