#include "mmcf/report_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace mmcf {

namespace {

/// JSON numbers cannot hold nan/inf; those become strings.
nlohmann::json num(double x) {
    if (std::isfinite(x)) return x;
    return format_number(x);
}

}  // namespace

std::string config_hash(const RunConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ULL;
        }
    };
    feed(std::string("command=") + to_string(cfg.command) + "\n");
    for (const auto& [k, v] : cfg.entries)
        if (k != "command" && k != "output_dir") feed(k + "=" + v + "\n");
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string csv_header_line(const std::string& hash) {
    return std::string("# mmcf ") + kVersion + " config_hash=" + hash + "\n";
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) throw Error("write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw Error("rename to '" + path + "' failed: " + ec.message());
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

std::string snapshot_csv(const Trajectory& traj, const Grid& g, const std::string& hash) {
    std::ostringstream out;
    out << csv_header_line(hash);
    out << (g.dim() == 1 ? "t,node_id,coord1,v,w,H,A2,coshr,support\n"
                         : "t,node_id,coord1,coord2,v,w,H,A2,coshr,support\n");
    for (const auto& snap : traj.snapshots) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!traj.mask.contains(i)) continue;
            const auto& p = snap.state.points[i];
            out << format_number(snap.t) << ',' << i << ',' << format_number(g.coords(i)[0]);
            if (g.dim() == 2) out << ',' << format_number(g.coords(i)[1]);
            out << ',' << format_number(snap.v[i]) << ',' << format_number(p.w) << ',' << format_number(p.mean_h)
                << ',' << format_number(p.a2) << ',' << format_number(p.cosh_r) << ','
                << format_number(p.support_e) << '\n';
        }
    }
    return out.str();
}

nlohmann::json to_json(const ResidualReport& r) {
    return {{"name", r.name},
            {"max_residual", num(r.max_residual)},
            {"raw_residual", num(r.raw_residual)},
            {"scale", num(r.scale)},
            {"max_lhs", num(r.max_lhs)},
            {"max_rhs", num(r.max_rhs)},
            {"nodes_checked", r.nodes_checked},
            {"times_checked", r.times_checked},
            {"worst_node", r.worst_node},
            {"worst_time", num(r.worst_time)},
            {"h", num(r.h)},
            {"dt", num(r.dt)},
            {"tolerance", num(r.tolerance)},
            {"passed", r.passed},
            {"note", r.note}};
}

nlohmann::json to_json(const MarginReport& r) {
    return {{"name", r.name},
            {"worst_margin", num(r.worst_margin)},
            {"tolerance", num(r.tolerance)},
            {"points_checked", r.points_checked},
            {"worst_time", num(r.worst_time)},
            {"worst_node", r.worst_node},
            {"skipped", r.skipped},
            {"passed", r.passed},
            {"note", r.note}};
}

nlohmann::json to_json(const BoundReport& r) {
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : r.samples) {
        nlohmann::json f = nlohmann::json::array();
        for (double x : s.factors) f.push_back(num(x));
        samples.push_back({{"t", num(s.t)}, {"lhs", num(s.lhs)}, {"rhs", num(s.rhs)}, {"factors", f}});
    }
    return {{"name", r.name},           {"factor_names", r.factor_names}, {"samples", samples},
            {"worst_ratio", num(r.worst_ratio)}, {"set_emptied", r.set_emptied}, {"passed", r.passed},
            {"note", r.note}};
}

nlohmann::json to_json(const ExhaustionReport& r) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& l : r.levels)
        levels.push_back({{"delta", num(l.delta)},
                          {"T", num(l.T)},
                          {"epsilon", num(l.epsilon)},
                          {"mask_nodes", l.mask_nodes},
                          {"steps", l.steps}});
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : r.comparisons)
        comps.push_back({{"level", c.level},
                         {"sup_difference", num(c.sup_difference)},
                         {"common_nodes", c.common_nodes},
                         {"common_times", c.common_times}});
    return {{"levels", levels}, {"comparisons", comps}, {"theta", num(r.theta)}, {"inner_cosh", num(r.inner_cosh)}};
}

nlohmann::json to_json(const RhsComparison& r) {
    return {{"normalization", num(r.normalization)},
            {"max_abs_difference", num(r.max_abs_difference)},
            {"max_abs_parametric", num(r.max_abs_parametric)},
            {"max_abs_second_order", num(r.max_abs_second_order)},
            {"max_abs_drift", num(r.max_abs_drift)},
            {"predicted_max_difference", num(r.predicted_max_difference)},
            {"decomposition_error", num(r.decomposition_error)},
            {"second_order_ratio", num(r.second_order_ratio)}};
}

nlohmann::json report_document(const RunConfig& cfg, const std::string& hash, nlohmann::json payload) {
    nlohmann::json config = nlohmann::json::object();
    for (const auto& [k, v] : cfg.entries) config[k] = v;
    return {{"version", kVersion},
            {"config_hash", hash},
            {"command", to_string(cfg.command)},
            {"config", config},
            {"report", std::move(payload)}};
}

}  // namespace mmcf
