#include "mmcf/flow_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mmcf/parallel.hpp"

namespace mmcf {

namespace {

double alpha_q(const Tangent& p, const Sym2& q, int n) {
    const double w2 = 1.0 + norm2(p, n);
    if (n == 1) return q.xx - p[0] * p[0] * q.xx / w2;
    return q.xx + q.yy - (p[0] * p[0] * q.xx + 2.0 * p[0] * p[1] * q.xy + p[1] * p[1] * q.yy) / w2;
}

double lambda_max_alpha(const Tangent& p, int n) {
    // alpha = delta - p p / w^2 has eigenvalues 1/w^2 (along p) and 1 (orthogonal).
    return n == 1 ? 1.0 / (1.0 + p[0] * p[0]) : 1.0;
}

double dot_n(const Tangent& a, const Tangent& b, int n) { return n == 1 ? a[0] * b[0] : a[0] * b[0] + a[1] * b[1]; }

void impose_boundary(Field& v, double t, const FlowConfig& cfg, const DomainMask& mask, const Field& frozen) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!mask.inside[i] || !mask.boundary[i]) continue;
        v[i] = cfg.boundary_policy == BoundaryPolicy::prescribed ? cfg.boundary_data(i, t) : frozen[i];
    }
}

double max_abs(const Field& v, const DomainMask& mask) {
    double m = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (mask.inside[i]) m = std::max(m, std::abs(v[i]));
    return m;
}

std::vector<double> snapshot_schedule(const FlowConfig& cfg) {
    const double end = cfg.t0 + cfg.T;
    const double slack = 1e-12 * std::max(1.0, std::abs(end));
    std::vector<double> times;
    if (!cfg.snapshot_times.empty()) {
        for (double t : cfg.snapshot_times)
            if (t > cfg.t0 + slack && t < end - slack) times.push_back(t);
        std::sort(times.begin(), times.end());
        times.erase(std::unique(times.begin(), times.end()), times.end());
    } else if (cfg.cadence > 0.0) {
        for (int k = 1;; ++k) {
            const double t = cfg.t0 + k * cfg.cadence;
            if (t >= end - slack) break;
            times.push_back(t);
        }
    }
    times.push_back(end);
    return times;
}

}  // namespace

void FlowConfig::validate(int n) const {
    if (n != 1 && n != 2) throw InvalidArgument("dimension must be 1 or 2");
    if (!(std::abs(sigma) < n)) throw InvalidArgument("sigma must satisfy |sigma| < n");
    if (!(cfl > 0.0 && cfl < 1.0)) throw InvalidArgument("cfl must lie in (0, 1)");
    if (!(T > 0.0)) throw InvalidArgument("T must be positive");
    if (cadence < 0.0) throw InvalidArgument("cadence must be non-negative");
    if (epsilon < 0.0 || epsilon >= 1.0) throw InvalidArgument("epsilon must lie in [0, 1)");
    if (rhs_mode == RhsMode::normalized && !(normalization > 0.0))
        throw InvalidArgument("normalization must be positive");
    if (boundary_policy == BoundaryPolicy::prescribed && !boundary_data)
        throw InvalidArgument("prescribed boundary policy needs boundary data");
    if (!(w_cap > 1.0)) throw InvalidArgument("w_cap must exceed 1");
    if (!(growth_limit > 1.0)) throw InvalidArgument("growth_limit must exceed 1");
    if (dt_max < 0.0) throw InvalidArgument("dt_max must be non-negative");
}

Field rhs(const Field& v, const Grid& g, const FlowConfig& cfg, const DomainMask& mask, double t) {
    if (v.size() != g.size()) throw InvalidArgument("field size does not match grid");
    const int n = g.dim();
    const auto d = scalar_derivatives(v, g, mask);
    Field out(v.size(), 0.0);
    const bool normalized = cfg.rhs_mode == RhsMode::normalized;
    const double c = normalized ? cfg.normalization : 1.0;
    const double drift = normalized ? 1.0 : static_cast<double>(n);
    parallel_for(v.size(), [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            if (!mask.inside[i]) continue;
            if (mask.boundary[i]) {
                if (cfg.boundary_policy == BoundaryPolicy::prescribed) {
                    const double dl = 1e-6 * std::max(1.0, std::abs(t));
                    out[i] = (cfg.boundary_data(i, t + dl) - cfg.boundary_data(i, t - dl)) / (2.0 * dl);
                }
                continue;
            }
            const Tangent& p = d.grad[i];
            const double y = g.y(i);
            const double w = std::sqrt(1.0 + norm2(p, n));
            if (!std::isfinite(w) || !std::isfinite(v[i]))
                throw InstabilityError("non-finite value at node " + std::to_string(i));
            if (w > cfg.w_cap)
                throw GraphConditionError("slope w = " + std::to_string(w) + " exceeds cap at node " + std::to_string(i));
            out[i] = c * y * y * alpha_q(p, d.hess[i], n) - drift * y * dot_n(p, g.grad_y(i), n) - cfg.sigma * y * w;
        }
    });
    return out;
}

Field rhs(const Field& v, const Grid& g, const FlowConfig& cfg) { return rhs(v, g, cfg, DomainMask::whole(g)); }

double principal_coefficient(const SurfaceState& s, const Grid& g, const DomainMask& mask) {
    double m = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!mask.inside[i]) continue;
        const double y = g.y(i);
        m = std::max(m, y * y * lambda_max_alpha(s.points[i].grad_v, g.dim()));
    }
    return m;
}

double stable_dt(const SurfaceState& s, const Grid& g, const FlowConfig& cfg, const DomainMask& mask) {
    const int n = g.dim();
    double m = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!mask.inside[i] || mask.boundary[i]) continue;
        const double y = g.y(i);
        const Tangent& hs = g.frame_spacing(i);
        double inv = 0.0;
        for (int a = 0; a < n; ++a) inv += 1.0 / (hs[a] * hs[a]);
        m = std::max(m, y * y * lambda_max_alpha(s.points[i].grad_v, n) * inv);
    }
    double dt = m > 0.0 ? cfg.cfl / (2.0 * m) : std::numeric_limits<double>::infinity();
    if (cfg.cadence > 0.0) dt = std::min(dt, cfg.cadence);
    if (cfg.dt_max > 0.0) dt = std::min(dt, cfg.dt_max);
    if (!std::isfinite(dt)) dt = cfg.T;
    return dt;
}

Field step(const Field& v, double t, double dt, const Grid& g, const FlowConfig& cfg, const DomainMask& mask) {
    const Field k1 = rhs(v, g, cfg, mask, t);
    Field v1 = v;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (mask.is_interior(i)) v1[i] += dt * k1[i];
    impose_boundary(v1, t + dt, cfg, mask, v);
    const Field k2 = rhs(v1, g, cfg, mask, t + dt);
    Field out = v;
    for (std::size_t i = 0; i < v.size(); ++i)
        if (mask.is_interior(i)) out[i] = 0.5 * v[i] + 0.5 * (v1[i] + dt * k2[i]);
    impose_boundary(out, t + dt, cfg, mask, v);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (mask.inside[i] && !std::isfinite(out[i]))
            throw InstabilityError("non-finite value after step at node " + std::to_string(i));
    return out;
}

Trajectory evolve(const Field& v0, const FlowConfig& cfg, const Grid& g, const DomainMask& mask) {
    cfg.validate(g.dim());
    if (v0.size() != g.size()) throw InvalidArgument("field size does not match grid");
    if (mask.count() == 0) throw InvalidArgument("empty mask");
    for (std::size_t i = 0; i < v0.size(); ++i)
        if (mask.inside[i] && !std::isfinite(v0[i])) throw InvalidArgument("initial data is not finite");

    Trajectory traj;
    traj.mask = mask;
    traj.sigma = cfg.sigma;
    Field v = v0;
    if (cfg.boundary_policy == BoundaryPolicy::prescribed) impose_boundary(v, cfg.t0, cfg, mask, v0);
    traj.snapshots.push_back({cfg.t0, v, curvature(v, g, mask)});

    const double limit = cfg.growth_limit * std::max(1.0, max_abs(v0, mask));
    double t = cfg.t0;
    for (double tb : snapshot_schedule(cfg)) {
        const double span = tb - t;
        const double dt0 = stable_dt(traj.back().state, g, cfg, mask);
        const auto m = static_cast<std::size_t>(std::max(1.0, std::ceil(span / dt0 - 1e-9)));
        const double dt = span / static_cast<double>(m);
        try {
            for (std::size_t j = 0; j < m; ++j) {
                v = step(v, t + static_cast<double>(j) * dt, dt, g, cfg, mask);
                traj.dt_history.push_back(dt);
            }
            if (max_abs(v, mask) > limit) {
                std::ostringstream os;
                os << "max|v| exceeded " << limit << " at t = " << tb;
                throw InstabilityError(os.str());
            }
            t = tb;
            traj.snapshots.push_back({t, v, curvature(v, g, mask)});
        } catch (const GraphConditionError& e) {
            traj.events.push_back({t, "graph_condition", e.what()});
            traj.terminated = true;
            return traj;
        }
    }
    return traj;
}

Trajectory evolve(const Field& v0, const FlowConfig& cfg, const Grid& g) {
    if (cfg.epsilon > 0.0) return evolve(v0, cfg, g, truncate_domain(v0, g, cfg.epsilon));
    return evolve(v0, cfg, g, DomainMask::whole(g));
}

Field mollify(const Field& v0, double scale, const Grid& g) {
    if (g.full2d()) throw InvalidArgument("mollify supports n = 1 and axisymmetric grids only");
    if (v0.size() != g.size()) throw InvalidArgument("field size does not match grid");
    const double h = g.h();
    if (!(scale >= 2.0 * h * (1.0 - 1e-12))) throw InvalidArgument("mollifier scale must be at least 2h");
    const auto N = static_cast<long>(v0.size());
    const long m = static_cast<long>(std::floor(scale / h));
    if (m >= N - 1) throw InvalidArgument("mollifier scale exceeds the grid");
    const bool through_pole = g.axisymmetric();

    auto extended = [&](long j) {
        if (j < 0) return through_pole ? v0[static_cast<std::size_t>(-j)] : 2.0 * v0[0] - v0[static_cast<std::size_t>(-j)];
        if (j > N - 1) return 2.0 * v0[static_cast<std::size_t>(N - 1)] - v0[static_cast<std::size_t>(2 * (N - 1) - j)];
        return v0[static_cast<std::size_t>(j)];
    };
    std::vector<double> kernel(static_cast<std::size_t>(2 * m + 1));
    double total = 0.0;
    for (long k = -m; k <= m; ++k) {
        const double u = static_cast<double>(k) * h / scale;
        const double w = u * u < 1.0 ? (1.0 - u * u) * (1.0 - u * u) : 0.0;
        kernel[static_cast<std::size_t>(k + m)] = w;
        total += w;
    }
    Field out(v0.size());
    for (long i = 0; i < N; ++i) {
        double acc = 0.0;
        for (long k = -m; k <= m; ++k) acc += kernel[static_cast<std::size_t>(k + m)] * extended(i + k);
        out[static_cast<std::size_t>(i)] = acc / total;
    }
    return out;
}

ExhaustionSchedule schedule(const std::vector<double>& delta, int n, double sigma) {
    if (n != 1 && n != 2) throw InvalidArgument("dimension must be 1 or 2");
    if (!(std::abs(sigma) < n)) throw InvalidArgument("sigma must satisfy |sigma| < n");
    if (delta.empty()) throw InvalidArgument("schedule needs at least one delta");
    const double ns = n + sigma;
    ExhaustionSchedule s;
    for (std::size_t k = 0; k < delta.size(); ++k) {
        const double d = delta[k];
        if (!(d > 0.0 && d < 1.0)) throw InvalidArgument("delta values must lie in (0, 1)");
        if (k > 0 && !(d < delta[k - 1])) throw InvalidArgument("delta values must be strictly decreasing");
        const double inv_eps = 1.0 / std::sqrt(d) - sigma / ns;
        if (k == 0 && inv_eps < 2.0)
            throw InvalidArgument("first delta too large: 1/sqrt(delta) - sigma/(n+sigma) must be at least 2");
        s.delta.push_back(d);
        s.T.push_back(-std::log(d) / (2.0 * ns));
        s.epsilon.push_back(1.0 / inv_eps);
    }
    return s;
}

ExhaustionReport exhaustion_run(const Field& v0, const ExhaustionSchedule& sched, const FlowConfig& cfg,
                                const Grid& g, double theta, double inner_cosh) {
    if (!(theta > 0.0 && theta <= 1.0)) throw InvalidArgument("theta must lie in (0, 1]");
    const std::size_t L = sched.delta.size();
    if (L == 0 || sched.T.size() != L || sched.epsilon.size() != L) throw InvalidArgument("malformed schedule");

    ExhaustionReport report;
    report.theta = theta;
    report.inner_cosh = inner_cosh;
    std::vector<Trajectory> runs;
    for (std::size_t k = 0; k < L; ++k) {
        FlowConfig c = cfg;
        c.t0 = 0.0;
        c.T = sched.T[k];
        c.epsilon = sched.epsilon[k];
        c.boundary_policy = BoundaryPolicy::frozen;
        c.boundary_data = nullptr;
        c.snapshot_times.clear();
        if (cfg.cadence > 0.0)
            for (int j = 1; j * cfg.cadence < c.T; ++j) c.snapshot_times.push_back(j * cfg.cadence);
        for (std::size_t j = 0; j < k; ++j) c.snapshot_times.push_back(sched.T[j]);
        Trajectory tr = evolve(v0, c, g);
        if (tr.terminated) throw GraphConditionError("exhaustion level " + std::to_string(k) + " terminated early");
        report.levels.push_back({sched.delta[k], sched.T[k], sched.epsilon[k], tr.mask.count(), tr.dt_history.size()});
        runs.push_back(std::move(tr));
    }
    for (std::size_t k = 1; k < L; ++k) {
        const Trajectory& a = runs[k - 1];
        const Trajectory& b = runs[k];
        const double bound = theta / sched.epsilon[k - 1];
        ExhaustionComparison cmp;
        cmp.level = k;
        std::vector<std::size_t> nodes;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const double cr = 1.0 / g.y(i);
            if (!a.mask.inside[i] || !b.mask.inside[i] || cr > bound) continue;
            if (inner_cosh > 0.0 && cr > inner_cosh) continue;
            nodes.push_back(i);
        }
        cmp.common_nodes = nodes.size();
        for (const auto& sa : a.snapshots) {
            for (const auto& sb : b.snapshots) {
                if (std::abs(sa.t - sb.t) > 1e-12 * std::max(1.0, sa.t)) continue;
                ++cmp.common_times;
                for (std::size_t i : nodes) cmp.sup_difference = std::max(cmp.sup_difference, std::abs(sa.v[i] - sb.v[i]));
            }
        }
        report.comparisons.push_back(cmp);
    }
    return report;
}

RhsComparison compare_rhs(const Field& v, const Grid& g, double sigma, double normalization, const DomainMask& mask) {
    const int n = g.dim();
    const auto d = scalar_derivatives(v, g, mask);
    RhsComparison r;
    r.normalization = normalization;
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!mask.is_interior(i)) continue;
        const Tangent& p = d.grad[i];
        const double y = g.y(i);
        const double w = std::sqrt(1.0 + norm2(p, n));
        const double S = y * y * alpha_q(p, d.hess[i], n);
        const double D = y * dot_n(p, g.grad_y(i), n);
        const double param = S - n * D - sigma * y * w;
        const double alt = normalization * S - D - sigma * y * w;
        const double diff = param - alt;
        const double predicted = (1.0 - normalization) * S - (n - 1) * D;
        r.max_abs_difference = std::max(r.max_abs_difference, std::abs(diff));
        r.max_abs_parametric = std::max(r.max_abs_parametric, std::abs(param));
        r.max_abs_second_order = std::max(r.max_abs_second_order, std::abs(S));
        r.max_abs_drift = std::max(r.max_abs_drift, std::abs(D));
        r.predicted_max_difference = std::max(r.predicted_max_difference, std::abs(predicted));
        r.decomposition_error = std::max(r.decomposition_error, std::abs(diff - predicted));
        num += normalization * S * S;
        den += S * S;
    }
    r.second_order_ratio = den > 0.0 ? num / den : normalization;
    return r;
}

}  // namespace mmcf
