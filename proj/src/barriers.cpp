#include "mmcf/barriers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mmcf {

void BarrierSpec::validate() const {
    if (n != 1 && n != 2) throw InvalidArgument("dimension must be 1 or 2");
    if (!(std::abs(sigma) < n)) throw InvalidArgument("sigma must satisfy |sigma| < n");
    if (kind == BarrierKind::horosphere && !(c0 > 0.0)) throw InvalidArgument("horosphere needs c0 > 0");
    if (kind != BarrierKind::horosphere && !(r > 0.0)) throw InvalidArgument("radius must be positive");
}

BarrierKind parse_barrier_kind(const std::string& name) {
    if (name == "hemisphere") return BarrierKind::hemisphere;
    if (name == "horosphere") return BarrierKind::horosphere;
    if (name == "cap") return BarrierKind::cap;
    throw InvalidArgument("unknown barrier kind '" + name + "'");
}

std::string to_string(BarrierKind kind) {
    switch (kind) {
        case BarrierKind::hemisphere: return "hemisphere";
        case BarrierKind::horosphere: return "horosphere";
        case BarrierKind::cap: return "cap";
    }
    return "unknown";
}

CapField cap_field(const BarrierSpec& spec, const Grid& g) {
    spec.validate();
    if (spec.n != g.dim()) throw InvalidArgument("barrier dimension does not match grid");
    const double b = spec.sigma * spec.r / spec.n;
    const double c = spec.r * spec.r * (1.0 - spec.sigma * spec.sigma / (spec.n * spec.n));
    CapField out{Field(g.size(), 0.0), {}};
    std::vector<std::uint8_t> include(g.size(), 0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double by = b * g.y(i);
        const double rho = -by + std::sqrt(by * by + c);
        if (rho > 0.0 && std::isfinite(rho)) {
            out.v[i] = std::log(rho);
            include[i] = 1;
        }
    }
    out.mask = DomainMask::from_inclusion(g, std::move(include));
    return out;
}

Field horosphere_field(double c0, double t, double sigma, const Grid& g) {
    if (!(c0 > 0.0)) throw InvalidArgument("horosphere needs c0 > 0");
    Field v(g.size());
    const double shift = std::log(c0) + (g.dim() - sigma) * t;
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = shift - std::log(g.y(i));
    return v;
}

Field hemisphere_field(double r, const Grid& g) {
    if (!(r > 0.0)) throw InvalidArgument("radius must be positive");
    return Field(g.size(), std::log(r));
}

Field barrier_field(const BarrierSpec& spec, const Grid& g, double t) {
    spec.validate();
    switch (spec.kind) {
        case BarrierKind::hemisphere: return hemisphere_field(spec.r, g);
        case BarrierKind::horosphere: return horosphere_field(spec.c0, t, spec.sigma, g);
        case BarrierKind::cap: return cap_field(spec, g).v;
    }
    throw InvalidArgument("unknown barrier kind");
}

MarginReport comparison_check(const Trajectory& lower, const Trajectory& upper, double tolerance) {
    if (lower.snapshots.empty() || upper.snapshots.empty()) throw InvalidArgument("empty trajectory");
    const std::size_t N = lower.front().v.size();
    if (upper.front().v.size() != N || lower.mask.inside.size() != N || upper.mask.inside.size() != N)
        throw InvalidArgument("trajectories live on different grids");
    MarginReport r;
    r.name = "comparison";
    r.tolerance = tolerance;
    r.worst_margin = std::numeric_limits<double>::infinity();
    for (const auto& a : lower.snapshots) {
        for (const auto& b : upper.snapshots) {
            if (std::abs(a.t - b.t) > 1e-12 * std::max(1.0, std::abs(a.t))) continue;
            for (std::size_t i = 0; i < N; ++i) {
                if (!lower.mask.inside[i] || !upper.mask.inside[i]) continue;
                const double m = b.v[i] - a.v[i];
                ++r.points_checked;
                if (m < r.worst_margin) {
                    r.worst_margin = m;
                    r.worst_node = i;
                    r.worst_time = a.t;
                }
            }
        }
    }
    if (r.points_checked == 0) {
        r.worst_margin = 0.0;
        r.note = "no common times or nodes";
    }
    r.passed = r.worst_margin >= -tolerance;
    return r;
}

}  // namespace mmcf
