#include "mmcf/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace mmcf {

namespace {

std::array<double, 3> centered_weights(double t0, double t1, double t2) {
    const double h1 = t1 - t0;
    const double h2 = t2 - t1;
    if (!(h1 > 0.0 && h2 > 0.0)) throw InvalidArgument("snapshot times must be strictly increasing");
    return {-h2 / (h1 * (h1 + h2)), (h2 - h1) / (h1 * h2), h1 / (h2 * (h1 + h2))};
}

std::vector<Field> collect(const Trajectory& traj, const std::function<double(const PointGeometry&, double t)>& f) {
    std::vector<Field> out;
    out.reserve(traj.size());
    for (const auto& s : traj.snapshots) {
        Field q(s.v.size(), 0.0);
        for (std::size_t i = 0; i < q.size(); ++i)
            if (traj.mask.inside[i]) q[i] = f(s.state.points[i], s.t);
        out.push_back(std::move(q));
    }
    return out;
}

TensorField second_form(const SurfaceState& s) {
    std::vector<Sym2> a(s.points.size());
    for (std::size_t i = 0; i < a.size(); ++i) a[i] = s.points[i].second_form_h;
    return TensorField::from_sym2(a, s.n);
}

double gdot(const Tangent& a, const Tangent& b, const PointGeometry& p, int n) {
    const Sym2& gi = p.metric_h_inv;
    if (n == 1) return gi.xx * a[0] * b[0];
    return gi.xx * a[0] * b[0] + gi.xy * (a[0] * b[1] + a[1] * b[0]) + gi.yy * a[1] * b[1];
}

struct Selection {
    int depth = 2;
    double pole_margin = 0.0;

    template <class Options>
    Selection(const Options& o, const Grid& g)
        : depth(std::max(o.min_depth, static_cast<int>(std::ceil(o.margin / g.h() - 1e-9)))),
          pole_margin(g.dim() == 2 ? o.pole_margin : 0.0) {}
};

bool eligible(const DomainMask& m, const Grid& g, std::size_t i, const Selection& sel) {
    if (!m.inside[i] || m.depth[i] < sel.depth) return false;
    return sel.pole_margin <= 0.0 || g.coords(i)[0] >= sel.pole_margin;
}

void require_length(const Trajectory& traj, std::size_t need) {
    if (traj.size() < need) throw InvalidArgument("trajectory has too few snapshots for this check");
}

struct Accumulator {
    double max_diff = 0.0;
    double max_lhs = 0.0;
    double max_rhs = 0.0;
    std::size_t count = 0;
    std::size_t node = 0;
    double time = 0.0;

    void add(double lhs, double rhs, std::size_t i, double t) {
        const double d = std::abs(lhs - rhs);
        if (d > max_diff || count == 0) {
            max_diff = d;
            node = i;
            time = t;
        }
        max_lhs = std::max(max_lhs, std::abs(lhs));
        max_rhs = std::max(max_rhs, std::abs(rhs));
        ++count;
    }
};

ResidualReport finish(const std::string& name, const Accumulator& acc, std::size_t times, const Trajectory& traj,
                      const Grid& g, double tol) {
    ResidualReport r;
    r.name = name;
    r.raw_residual = acc.max_diff;
    r.scale = std::max({1.0, acc.max_lhs, acc.max_rhs});
    r.max_residual = acc.max_diff / r.scale;
    r.max_lhs = acc.max_lhs;
    r.max_rhs = acc.max_rhs;
    r.nodes_checked = acc.count;
    r.times_checked = times;
    r.worst_node = acc.node;
    r.worst_time = acc.time;
    r.h = g.h();
    r.dt = traj.size() > 1 ? traj.snapshots[1].t - traj.snapshots[0].t : 0.0;
    r.tolerance = tol;
    r.passed = acc.count > 0 && r.max_residual <= tol;
    if (acc.count == 0) r.note = "no eligible nodes";
    return r;
}

// g-covariant Hessian of a scalar field as a rank-2 tensor.
TensorField surface_hessian(const Field& f, const SurfaceState& s, const Grid& g, const DomainMask& m) {
    const TensorField d1 = surface_covariant_derivative(TensorField::from_scalar(f, s.n), s, g, m);
    return surface_covariant_derivative(d1, s, g, m);
}

ResidualReport simons_check(const Trajectory& traj, const Grid& g, const IdentityOptions& opt) {
    const int n = g.dim();
    const auto& mask = traj.mask;
    const Selection sel(opt, g);
    Accumulator acc;
    for (const auto& snap : traj.snapshots) {
        const SurfaceState& s = snap.state;
        const TensorField a = second_form(s);
        const TensorField da = surface_covariant_derivative(a, s, g, mask);
        const TensorField dda = surface_covariant_derivative(da, s, g, mask);
        const TensorField hh = surface_hessian(s.field(&PointGeometry::mean_h), s, g, mask);
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!eligible(mask, g, i, sel)) continue;
            const auto& p = s.points[i];
            const Sym2& gi = p.metric_h_inv;
            const Sym2& A = p.second_form_h;
            const Sym2 aga = sandwich(A, gi, A, n);
            const auto d4 = dda.at(i);
            const auto h2 = hh.at(i);
            for (int x = 0; x < n; ++x)
                for (int y = x; y < n; ++y) {
                    double lhs = 0.0;
                    for (int c = 0; c < n; ++c)
                        for (int d = 0; d < n; ++d) lhs += gi(c, d) * d4[((c * n + d) * n + x) * n + y];
                    const double rhs = h2[x * n + y] + p.mean_h * aga(x, y) - p.a2 * A(x, y) - n * A(x, y) +
                                       p.mean_h * p.metric_h(x, y);
                    acc.add(lhs, rhs, i, snap.t);
                }
        }
    }
    return finish("simons", acc, traj.size(), traj, g, opt.tolerance);
}

}  // namespace

void CutoffParams::validate_gradient() const {
    if (n != 1 && n != 2) throw InvalidArgument("dimension must be 1 or 2");
    if (!(sigma >= 0.0 && sigma < n)) throw InvalidArgument("estimates require 0 <= sigma < n");
    if (!(T > 0.0)) throw InvalidArgument("T must be positive");
    const double growth = sigma / (n + sigma) * std::exp((n + sigma) * T);
    if (!(cosh_R >= 1.0 && cosh_R >= growth)) throw InvalidArgument("cosh R below sigma/(n+sigma) e^{(n+sigma)T}");
    if (!(theta > growth / cosh_R && theta < 1.0)) throw InvalidArgument("theta outside the admissible interval");
}

void CutoffParams::validate_curvature() const {
    if (n != 1 && n != 2) throw InvalidArgument("dimension must be 1 or 2");
    if (!(sigma >= 0.0 && sigma < n)) throw InvalidArgument("estimates require 0 <= sigma < n");
    if (!(cosh_R >= n)) throw InvalidArgument("cosh R must be at least n");
    if (!(theta > 0.0 && theta < 1.0)) throw InvalidArgument("theta must lie in (0, 1)");
}

double eta_cutoff(const CutoffParams& params, double cosh_r, double t) {
    const double ns = params.n + params.sigma;
    return params.cosh_R - std::exp(ns * t) * (cosh_r + params.sigma / ns);
}

CutoffParams calibrate_cutoff(const Trajectory& traj, const Grid& g, CutoffParams params) {
    double sup_u2 = 0.0;
    for (const auto& s : traj.snapshots) {
        if (s.t > params.T * (1.0 + 1e-12)) break;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!traj.mask.inside[i] || s.state.points[i].cosh_r > params.cosh_R) continue;
            const double u = 1.0 / s.state.points[i].support_e;
            sup_u2 = std::max(sup_u2, u * u);
        }
    }
    if (!(sup_u2 > 0.0)) throw InvalidArgument("region {r <= R} is empty");
    params.k = 1.0 / (2.0 * sup_u2);
    double c0 = std::numeric_limits<double>::infinity();
    for (const auto& s : traj.snapshots) {
        if (s.t > params.T * (1.0 + 1e-12)) break;
        for (std::size_t i = 0; i < g.size(); ++i) {
            const auto& p = s.state.points[i];
            if (!traj.mask.inside[i] || p.cosh_r > params.cosh_R) continue;
            const double u2 = 1.0 / (p.support_e * p.support_e);
            const double phi = u2 / (1.0 - params.k * u2);
            c0 = std::min({c0, 1.0 / dot(p.x, p.x), phi});
        }
    }
    params.c0 = c0;
    return params;
}

Field heat_operator_numeric(const std::vector<Field>& q, const Trajectory& traj, std::size_t index, const Grid& g) {
    if (q.size() != traj.size()) throw InvalidArgument("series length does not match trajectory");
    if (index == 0 || index + 1 >= traj.size()) throw InvalidArgument("heat operator needs snapshots on both sides");
    const auto& s0 = traj.snapshots[index - 1];
    const auto& s1 = traj.snapshots[index];
    const auto& s2 = traj.snapshots[index + 1];
    const auto w = centered_weights(s0.t, s1.t, s2.t);
    const int n = g.dim();
    const auto& mask = traj.mask;
    const auto grad = covariant_gradient(q[index], g, mask);
    const Field lap = surface_laplace_beltrami(q[index], s1.state, g, mask);
    Field out(q[index].size(), 0.0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!mask.inside[i]) continue;
        const double dq = w[0] * q[index - 1][i] + w[1] * q[index][i] + w[2] * q[index + 1][i];
        const double vt = w[0] * s0.v[i] + w[1] * s1.v[i] + w[2] * s2.v[i];
        const Tangent& p = s1.state.points[i].grad_v;
        const double pq = n == 1 ? p[0] * grad[i][0] : p[0] * grad[i][0] + p[1] * grad[i][1];
        out[i] = dq - vt * pq / (1.0 + norm2(p, n)) - lap[i];
    }
    return out;
}

Trajectory identity_trajectory(const Field& v0, FlowConfig cfg, const Grid& g, const DomainMask& mask, double dt,
                               int steps) {
    if (!(dt > 0.0) || steps < 2) throw InvalidArgument("identity_trajectory needs dt > 0 and steps >= 2");
    cfg.T = dt * steps;
    cfg.cadence = dt;
    cfg.snapshot_times.clear();
    cfg.dt_max = dt;
    return evolve(v0, cfg, g, mask);
}

const std::vector<std::string>& identity_names() {
    static const std::vector<std::string> names{"coshr", "nu_h_support", "nu_e_support", "simons", "A_evolution"};
    return names;
}

ResidualReport check_identity(const std::string& name, const Trajectory& traj, const Grid& g,
                              const IdentityOptions& opt) {
    if (std::find(identity_names().begin(), identity_names().end(), name) == identity_names().end())
        throw InvalidArgument("unknown identity '" + name + "'");
    if (traj.sigma < 0.0) throw InvalidArgument("identity checks require sigma >= 0");
    if (name == "simons") {
        require_length(traj, 1);
        return simons_check(traj, g, opt);
    }
    require_length(traj, 3);
    const int n = g.dim();
    const double sigma = traj.sigma;
    const auto& mask = traj.mask;

    std::function<double(const PointGeometry&, double)> quantity;
    if (name == "coshr") quantity = [](const PointGeometry& p, double) { return p.cosh_r; };
    if (name == "nu_h_support") quantity = [](const PointGeometry& p, double) { return p.support_h; };
    if (name == "nu_e_support") quantity = [](const PointGeometry& p, double) { return p.support_e; };
    if (name == "A_evolution") quantity = [](const PointGeometry& p, double) { return p.a2; };
    const auto q = collect(traj, quantity);

    const Selection sel(opt, g);
    Accumulator acc;
    for (std::size_t j = 1; j + 1 < traj.size(); ++j) {
        const auto& snap = traj.snapshots[j];
        const SurfaceState& s = snap.state;
        const Field lhs = heat_operator_numeric(q, traj, j, g);
        std::vector<Tangent> grad;
        std::vector<double> grad_a2;
        if (name == "nu_e_support") grad = covariant_gradient(q[j], g, mask);
        if (name == "A_evolution") {
            const TensorField da = surface_covariant_derivative(second_form(s), s, g, mask);
            grad_a2.assign(g.size(), 0.0);
            for (std::size_t i = 0; i < g.size(); ++i)
                if (mask.inside[i]) grad_a2[i] = tensor_norm2(da, s, i);
        }
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!eligible(mask, g, i, sel)) continue;
            const auto& p = s.points[i];
            double rhs = 0.0;
            if (name == "coshr") {
                rhs = (1.0 - 1.0 / (p.w * p.w)) / p.cosh_r - (n - sigma * p.normal_vertical) * p.cosh_r - sigma / p.w;
            } else if (name == "nu_h_support") {
                rhs = (p.a2 - n) * p.support_h;
            } else if (name == "nu_e_support") {
                // <grad q, x_{n+1} e>_H = g^{ab} q_a <dX_b, e>_E / x_{n+1}, dX_b = e^v (E_b + p_b z)
                const double ev = norm(p.x);
                const double y = g.y(i);
                const Tangent& dy = g.grad_y(i);
                const Tangent up{ev * (dy[0] + p.grad_v[0] * y), ev * (dy[1] + p.grad_v[1] * y)};
                const double cross = gdot(grad[i], up, p, n) / p.height;
                rhs = (p.a2 - sigma * p.normal_vertical) * p.support_e - 2.0 * cross;
            } else {
                rhs = 2.0 * p.a2 * p.a2 + 2.0 * n * p.a2 - 2.0 * grad_a2[i] - 4.0 * p.mean_h * p.mean_h +
                      2.0 * sigma * (p.mean_h - p.trace_a3);
            }
            acc.add(lhs[i], rhs, i, snap.t);
        }
    }
    return finish(name, acc, traj.size() - 2, traj, g, opt.tolerance);
}

const std::vector<std::string>& inequality_names() {
    static const std::vector<std::string> names{"eta_spacetime", "xi", "A_phi"};
    return names;
}

MarginReport check_inequality(const std::string& name, const Trajectory& traj, const Grid& g,
                              const CutoffParams& params, const InequalityOptions& opt) {
    if (std::find(inequality_names().begin(), inequality_names().end(), name) == inequality_names().end())
        throw InvalidArgument("unknown inequality '" + name + "'");
    const int n = g.dim();
    if (params.n != n) throw InvalidArgument("cutoff dimension does not match grid");
    if (!(params.sigma >= 0.0 && params.sigma < n)) throw InvalidArgument("inequality checks require 0 <= sigma < n");
    if (!(params.cosh_R >= 1.0)) throw InvalidArgument("cosh R must be at least 1");
    require_length(traj, 3);

    MarginReport r;
    r.name = name;
    r.tolerance = opt.tau;
    const double sigma = params.sigma;
    if (name == "A_phi" && sigma == 0.0) {
        r.skipped = true;
        r.passed = true;
        r.note = "skipped: the constants c1 = c0 k/sigma and c2 = 1/sigma degenerate at sigma = 0";
        return r;
    }

    CutoffParams cp = params;
    if (name == "A_phi" && (cp.k <= 0.0 || cp.c0 <= 0.0)) cp = calibrate_cutoff(traj, g, cp);

    auto eta_of = [&](const PointGeometry& p, double t) { return eta_cutoff(cp, p.cosh_r, t); };
    auto phi_of = [&](const PointGeometry& p) {
        const double u2 = 1.0 / (p.support_e * p.support_e);
        return u2 / (1.0 - cp.k * u2);
    };
    std::function<double(const PointGeometry&, double)> quantity;
    if (name == "eta_spacetime") quantity = eta_of;
    if (name == "xi")
        quantity = [&](const PointGeometry& p, double t) {
            const double e = eta_of(p, t);
            return e * e * e / p.support_e;
        };
    if (name == "A_phi") quantity = [&](const PointGeometry& p, double) { return p.a2 * phi_of(p); };
    const auto q = collect(traj, quantity);

    double worst = -std::numeric_limits<double>::infinity();
    double max_lhs = 0.0;
    double max_rhs = 0.0;
    const auto& mask = traj.mask;
    const Selection sel(opt, g);
    for (std::size_t j = 1; j + 1 < traj.size(); ++j) {
        const auto& snap = traj.snapshots[j];
        const SurfaceState& s = snap.state;
        const Field lhs = heat_operator_numeric(q, traj, j, g);
        std::vector<Tangent> du;
        std::vector<Tangent> dphi;
        std::vector<Tangent> dq;
        if (name == "A_phi") {
            Field u(g.size(), 0.0);
            Field phi(g.size(), 0.0);
            for (std::size_t i = 0; i < g.size(); ++i)
                if (mask.inside[i]) {
                    u[i] = 1.0 / s.points[i].support_e;
                    phi[i] = phi_of(s.points[i]);
                }
            du = covariant_gradient(u, g, mask);
            dphi = covariant_gradient(phi, g, mask);
            dq = covariant_gradient(q[j], g, mask);
        }
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!eligible(mask, g, i, sel)) continue;
            const auto& p = s.points[i];
            double rhs = 0.0;
            if (name == "eta_spacetime" || name == "xi") {
                if (!(eta_of(p, snap.t) > 0.0)) continue;
                rhs = name == "xi" ? (n + 2) * q[j][i] : 0.0;
            } else {
                if (p.a2 < 1.0 || p.cosh_r > cp.cosh_R) continue;
                const double u2 = 1.0 / (p.support_e * p.support_e);
                const double phi = phi_of(p);
                const double dphi_du2 = 1.0 / ((1.0 - cp.k * u2) * (1.0 - cp.k * u2));
                const double ck = 6.0 * n + (sigma * sigma + 4.0) / (cp.c0 * cp.k);
                const double gu2 = gdot(du[i], du[i], p, n);
                rhs = -cp.k * p.a2 * p.a2 * phi * phi + (ck - cp.k * dphi_du2 * gu2) * p.a2 * phi -
                      gdot(dphi[i], dq[i], p, n) / phi + sigma * sigma * phi;
            }
            const double m = lhs[i] - rhs;
            ++r.points_checked;
            max_lhs = std::max(max_lhs, std::abs(lhs[i]));
            max_rhs = std::max(max_rhs, std::abs(rhs));
            if (m > worst) {
                worst = m;
                r.worst_node = i;
                r.worst_time = snap.t;
            }
        }
    }
    if (r.points_checked == 0) {
        r.worst_margin = 0.0;
        r.passed = true;
        r.skipped = true;
        r.note = "no eligible points";
        return r;
    }
    r.worst_margin = worst / std::max({1.0, max_lhs, max_rhs});
    r.passed = r.worst_margin <= opt.tau;
    return r;
}

BoundReport verify_gradient_bound(const Trajectory& traj, const Grid& g, const CutoffParams& params) {
    params.validate_gradient();
    if (params.n != g.dim()) throw InvalidArgument("cutoff dimension does not match grid");
    const auto& mask = traj.mask;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (1.0 / g.y(i) <= params.cosh_R && !mask.inside[i])
            throw InvalidArgument("region {r <= R} is not contained in the computational domain");

    const int n = params.n;
    const double sigma = params.sigma;
    const double ns = n + sigma;
    double vmax = -std::numeric_limits<double>::infinity();
    double vmin = std::numeric_limits<double>::infinity();
    double sup0 = 0.0;
    for (const auto& s : traj.snapshots) {
        if (s.t > params.T * (1.0 + 1e-12)) break;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!mask.inside[i] || s.state.points[i].cosh_r > params.cosh_R) continue;
            vmax = std::max(vmax, s.v[i]);
            vmin = std::min(vmin, s.v[i]);
            if (&s == &traj.front()) sup0 = std::max(sup0, s.state.points[i].w);
        }
    }
    if (!(sup0 > 0.0)) throw InvalidArgument("region {r <= R} is empty");
    const double vosc = vmax - vmin;

    BoundReport r;
    r.name = "gradient_bound";
    r.factor_names = {"exp((n+2)t)", "exp(v_osc)", "(1-theta)^-3", "sup_0 w"};
    r.passed = true;
    for (const auto& s : traj.snapshots) {
        if (s.t > params.T * (1.0 + 1e-12)) break;
        double lhs = 0.0;
        bool any = false;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!mask.inside[i]) continue;
            const auto& p = s.state.points[i];
            if (std::exp(ns * s.t) * (p.cosh_r + sigma / ns) > params.theta * params.cosh_R) continue;
            lhs = std::max(lhs, p.w);
            any = true;
        }
        if (!any) {
            r.set_emptied = true;
            r.note = "set empty from t = " + std::to_string(s.t);
            break;
        }
        BoundSample b;
        b.t = s.t;
        b.lhs = lhs;
        b.factors = {std::exp((n + 2) * s.t), std::exp(vosc), std::pow(1.0 - params.theta, -3.0), sup0};
        b.rhs = b.factors[0] * b.factors[1] * b.factors[2] * b.factors[3];
        r.worst_ratio = std::max(r.worst_ratio, b.lhs / b.rhs);
        if (b.lhs > b.rhs) r.passed = false;
        r.samples.push_back(b);
    }
    return r;
}

BoundReport verify_curvature_bounds(const Trajectory& traj, const Grid& g, const CutoffParams& params, int m) {
    params.validate_curvature();
    if (m < 0) throw InvalidArgument("derivative order must be non-negative");
    if (params.n != g.dim()) throw InvalidArgument("cutoff dimension does not match grid");
    const auto& mask = traj.mask;
    BoundReport r;
    r.name = "curvature_bound_m" + std::to_string(m);
    r.factor_names = {"(1+1/t)^(m+1)", "(1-theta)^-2", "sup u^4"};
    if (m >= 1) r.factor_names.push_back("(1+1/t)^(m+2)");
    r.passed = true;
    double sup_u4 = 0.0;
    for (const auto& s : traj.snapshots) {
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!mask.inside[i] || s.state.points[i].cosh_r > params.cosh_R) continue;
            const double u = 1.0 / s.state.points[i].support_e;
            sup_u4 = std::max(sup_u4, u * u * u * u);
        }
        if (s.t <= 0.0) continue;
        Field dens(g.size(), 0.0);
        if (m == 0) {
            dens = s.state.field(&PointGeometry::a2);
        } else {
            TensorField t = second_form(s.state);
            for (int k = 0; k < m; ++k) t = surface_covariant_derivative(t, s.state, g, mask);
            for (std::size_t i = 0; i < g.size(); ++i)
                if (mask.inside[i]) dens[i] = tensor_norm2(t, s.state, i);
        }
        double lhs = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (!mask.inside[i] || s.state.points[i].cosh_r > params.theta * params.cosh_R) continue;
            lhs = std::max(lhs, dens[i]);
        }
        BoundSample b;
        b.t = s.t;
        b.lhs = lhs;
        const double f = 1.0 + 1.0 / s.t;
        b.factors = {std::pow(f, m + 1), std::pow(1.0 - params.theta, -2.0), sup_u4};
        if (m >= 1) b.factors.push_back(std::pow(f, m + 2));
        b.rhs = b.factors[0] * b.factors[1] * b.factors[2];
        const double c = b.lhs / b.rhs;
        if (!std::isfinite(c)) r.passed = false;
        r.worst_ratio = std::max(r.worst_ratio, c);
        r.samples.push_back(b);
    }
    if (r.samples.empty()) {
        r.passed = false;
        r.note = "no samples with t > 0";
    }
    return r;
}

double observed_order(double coarse, double fine, double ratio) {
    if (!(coarse > 0.0 && fine > 0.0 && ratio > 1.0)) return std::numeric_limits<double>::quiet_NaN();
    return std::log(coarse / fine) / std::log(ratio);
}

}  // namespace mmcf
