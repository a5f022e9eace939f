#include "mmcf/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mmcf {

namespace {

Vec3 up_vector(int n) { return n == 1 ? Vec3{0.0, 1.0, 0.0} : Vec3{0.0, 0.0, 1.0}; }

// Eigenvalues of m^{-1} b for symmetric m > 0, ascending.
std::array<double, 2> relative_eigenvalues(const Sym2& m, const Sym2& b, int n) {
    if (n == 1) return {b.xx / m.xx, 0.0};
    const Sym2 mi = inverse(m, 2);
    const double tr = mi.xx * b.xx + 2.0 * mi.xy * b.xy + mi.yy * b.yy;
    const double d = det(b, 2) / det(m, 2);
    const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - d));
    return {0.5 * tr - disc, 0.5 * tr + disc};
}

std::size_t ipow(int base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
    return r;
}

int digit(std::size_t idx, int s, int k, int n) {
    for (int r = k - 1; r > s; --r) idx /= static_cast<std::size_t>(n);
    return static_cast<int>(idx % static_cast<std::size_t>(n));
}

std::size_t set_digit(std::size_t idx, int s, int k, int n, int value) {
    const std::size_t place = ipow(n, k - 1 - s);
    const int old = digit(idx, s, k, n);
    return idx - static_cast<std::size_t>(old) * place + static_cast<std::size_t>(value) * place;
}

std::array<double, 8> connection_difference(const Tangent& p, const Sym2& q, double y, const Tangent& dy,
                                            const Sym2& ginv, int n) {
    // nabla_c g_ab for g = (delta + p p) / y^2
    double dg[2][2][2] = {};
    for (int c = 0; c < n; ++c)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const double base = (a == b ? 1.0 : 0.0) + p[a] * p[b];
                dg[c][a][b] = (q(c, a) * p[b] + p[a] * q(c, b)) / (y * y) - 2.0 * base * dy[c] / (y * y * y);
            }
    std::array<double, 8> out{};
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int l = 0; l < n; ++l) acc += ginv(k, l) * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j]);
                out[k * 4 + i * 2 + j] = 0.5 * acc;
            }
    return out;
}

}  // namespace

Field SurfaceState::field(double PointGeometry::*member) const {
    Field f(points.size(), 0.0);
    for (std::size_t i = 0; i < points.size(); ++i) f[i] = points[i].*member;
    return f;
}

std::vector<Vec3> embed(const Field& v, const Grid& g) {
    if (v.size() != g.size()) throw InvalidArgument("field size does not match grid");
    std::vector<Vec3> x(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) x[i] = std::exp(v[i]) * g.z(i);
    return x;
}

SlopeAndNormal slope_and_normal(const Field& v, const Grid& g, const DomainMask& mask) {
    if (v.size() != g.size()) throw InvalidArgument("field size does not match grid");
    const auto grad = covariant_gradient(v, g, mask);
    const int n = g.dim();
    SlopeAndNormal out{Field(v.size(), 1.0), std::vector<Vec3>(v.size())};
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!mask.inside[i]) continue;
        const double w = std::sqrt(1.0 + norm2(grad[i], n));
        const auto& fr = g.frame(i);
        Vec3 nu = g.z(i);
        for (int a = 0; a < n; ++a) nu = nu - grad[i][a] * fr[a];
        out.w[i] = w;
        out.normal[i] = (1.0 / w) * nu;
    }
    return out;
}

SlopeAndNormal slope_and_normal(const Field& v, const Grid& g) {
    return slope_and_normal(v, g, DomainMask::whole(g));
}

double cosh_radial(const Vec3& x, int n) {
    const double h = x[n];
    if (!(h > 0.0)) throw InvalidArgument("point is not in the upper half-space");
    return norm(x) / h;
}

Vec3 connection_correction(const Vec3& X, const Vec3& Y, const Vec3& x, int n) {
    const double h = x[n];
    if (!(h > 0.0)) throw InvalidArgument("point is not in the upper half-space");
    const Vec3 e = up_vector(n);
    const Vec3 r = dot(X, Y) * e - dot(X, e) * Y - dot(Y, e) * X;
    return (1.0 / h) * r;
}

Vec3 reflect(const Vec3& x) {
    const double r2 = dot(x, x);
    if (!(r2 > 0.0)) throw InvalidArgument("cannot reflect the origin");
    return (1.0 / r2) * x;
}

double mean_curvature_trace(const Tangent& p, const Sym2& q, double y, const Tangent& grad_y, int n) {
    const double p2 = norm2(p, n);
    const double w2 = 1.0 + p2;
    double aq = trace(q, n);
    if (n == 1) {
        aq -= p[0] * p[0] * q.xx / w2;
    } else {
        aq -= (p[0] * p[0] * q.xx + 2.0 * p[0] * p[1] * q.xy + p[1] * p[1] * q.yy) / w2;
    }
    double pdy = p[0] * grad_y[0];
    if (n == 2) pdy += p[1] * grad_y[1];
    return (y * aq - n * pdy) / std::sqrt(w2);
}

PointGeometry point_geometry(double v, const Tangent& p, const Sym2& q, const Grid& g, std::size_t i) {
    const int n = g.dim();
    PointGeometry pg;
    const double ev = std::exp(v);
    const double y = g.y(i);
    const auto& fr = g.frame(i);

    pg.grad_v = p;
    pg.hess_v = q;
    pg.x = ev * g.z(i);
    pg.height = ev * y;
    pg.w = std::sqrt(1.0 + norm2(p, n));
    if (!std::isfinite(pg.w) || !std::isfinite(ev) || !(pg.height > 0.0))
        throw GraphConditionError("non-finite slope or height at node " + std::to_string(i));

    Vec3 nu = g.z(i);
    for (int a = 0; a < n; ++a) nu = nu - p[a] * fr[a];
    pg.normal = (1.0 / pg.w) * nu;
    pg.normal_vertical = pg.normal[n];
    pg.cosh_r = cosh_radial(pg.x, n);
    pg.support_e = dot(pg.normal, pg.x);
    pg.support_h = pg.support_e / pg.height;

    const double e2v = ev * ev;
    const double s = ev / pg.w;
    pg.metric_e = {e2v * (1.0 + p[0] * p[0]), e2v * p[0] * p[1], e2v * (1.0 + p[1] * p[1])};
    pg.second_form_e = {s * (q.xx - p[0] * p[0] - 1.0), s * (q.xy - p[0] * p[1]), s * (q.yy - p[1] * p[1] - 1.0)};
    if (n == 1) {
        pg.metric_e.xy = pg.metric_e.yy = 0.0;
        pg.second_form_e.xy = pg.second_form_e.yy = 0.0;
    }
    const double x2 = pg.height * pg.height;
    pg.metric_h = {pg.metric_e.xx / x2, pg.metric_e.xy / x2, pg.metric_e.yy / x2};
    pg.metric_h_inv = inverse(pg.metric_h, n);
    if (n == 1) pg.metric_h_inv.xy = pg.metric_h_inv.yy = 0.0;
    const double nv = pg.normal_vertical;
    pg.second_form_h = {pg.second_form_e.xx / pg.height + nv * pg.metric_e.xx / x2,
                        pg.second_form_e.xy / pg.height + nv * pg.metric_e.xy / x2,
                        pg.second_form_e.yy / pg.height + nv * pg.metric_e.yy / x2};

    pg.kappa_e = relative_eigenvalues(pg.metric_e, pg.second_form_e, n);
    pg.mean_e = 0.0;
    pg.mean_h = 0.0;
    pg.a2 = 0.0;
    pg.trace_a3 = 0.0;
    for (int a = 0; a < n; ++a) {
        pg.kappa_h[a] = pg.height * pg.kappa_e[a] + nv;
        pg.mean_e += pg.kappa_e[a];
        pg.mean_h += pg.kappa_h[a];
        pg.a2 += pg.kappa_h[a] * pg.kappa_h[a];
        pg.trace_a3 += pg.kappa_h[a] * pg.kappa_h[a] * pg.kappa_h[a];
    }
    if (n == 1) pg.kappa_e[1] = pg.kappa_h[1] = 0.0;
    return pg;
}

SurfaceState curvature(const Field& v, const Grid& g, const DomainMask& mask) {
    if (v.size() != g.size()) throw InvalidArgument("field size does not match grid");
    const auto d = scalar_derivatives(v, g, mask);
    SurfaceState s;
    s.n = g.dim();
    s.points.resize(v.size());
    s.connection.assign(v.size(), std::array<double, 8>{});
    s.min_support = std::numeric_limits<double>::infinity();
    s.max_slope = 1.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!mask.inside[i]) continue;
        auto& pg = s.points[i];
        pg = point_geometry(v[i], d.grad[i], d.hess[i], g, i);
        s.connection[i] = connection_difference(d.grad[i], d.hess[i], g.y(i), g.grad_y(i), pg.metric_h_inv, s.n);
        s.min_support = std::min(s.min_support, pg.support_e);
        s.max_slope = std::max(s.max_slope, pg.w);
    }
    return s;
}

SurfaceState curvature(const Field& v, const Grid& g) { return curvature(v, g, DomainMask::whole(g)); }

Field surface_laplace_beltrami(const Field& f, const SurfaceState& s, const Grid& g, const DomainMask& mask) {
    if (f.size() != g.size() || s.points.size() != g.size()) throw InvalidArgument("field size does not match grid");
    const auto d = scalar_derivatives(f, g, mask);
    const int n = s.n;
    Field out(f.size(), 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!mask.inside[i]) continue;
        const Sym2& gi = s.points[i].metric_h_inv;
        const auto& c = s.connection[i];
        double acc = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double term = d.hess[i](a, b);
                for (int k = 0; k < n; ++k) term -= c[k * 4 + a * 2 + b] * d.grad[i][k];
                acc += gi(a, b) * term;
            }
        out[i] = acc;
    }
    return out;
}

TensorField surface_covariant_derivative(const TensorField& t, const SurfaceState& s, const Grid& g,
                                         const DomainMask& mask) {
    TensorField out = sphere_covariant_derivative(t, g, mask);
    const int n = t.n();
    const int k = t.rank();
    const std::size_t comps = t.components();
    for (std::size_t i = 0; i < t.nodes(); ++i) {
        if (!mask.inside[i]) continue;
        const auto ti = t.at(i);
        auto o = out.at(i);
        const auto& c = s.connection[i];
        for (int dir = 0; dir < n; ++dir)
            for (std::size_t a = 0; a < comps; ++a) {
                double corr = 0.0;
                for (int sl = 0; sl < k; ++sl) {
                    const int as = digit(a, sl, k, n);
                    for (int dd = 0; dd < n; ++dd) corr += c[dd * 4 + dir * 2 + as] * ti[set_digit(a, sl, k, n, dd)];
                }
                o[static_cast<std::size_t>(dir) * comps + a] -= corr;
            }
    }
    return out;
}

double tensor_norm2(const TensorField& t, const SurfaceState& s, std::size_t node) {
    const int n = t.n();
    const int k = t.rank();
    const std::size_t comps = t.components();
    const Sym2& gi = s.points[node].metric_h_inv;
    const auto ti = t.at(node);
    double acc = 0.0;
    for (std::size_t a = 0; a < comps; ++a) {
        if (ti[a] == 0.0) continue;
        for (std::size_t b = 0; b < comps; ++b) {
            double w = ti[a] * ti[b];
            for (int sl = 0; sl < k && w != 0.0; ++sl) w *= gi(digit(a, sl, k, n), digit(b, sl, k, n));
            acc += w;
        }
    }
    return acc;
}

Tangent raise_index(const Tangent& df, const PointGeometry& p, int n) {
    const Sym2& gi = p.metric_h_inv;
    if (n == 1) return {gi.xx * df[0], 0.0};
    return {gi.xx * df[0] + gi.xy * df[1], gi.xy * df[0] + gi.yy * df[1]};
}

Field extrinsic_laplace_beltrami(const AmbientFunction& f, const SurfaceState& s, const Grid& g,
                                 const DomainMask& mask) {
    const int n = s.n;
    Field out(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!mask.inside[i]) continue;
        const auto& pg = s.points[i];
        const AmbientJet j = f(pg.x);
        double lap = 0.0;
        double hnn = 0.0;
        double dnu = 0.0;
        for (int a = 0; a <= n; ++a) {
            lap += j.hess[a][a];
            dnu += j.grad[a] * pg.normal[a];
            for (int b = 0; b <= n; ++b) hnn += j.hess[a][b] * pg.normal[a] * pg.normal[b];
        }
        const double x = pg.height;
        out[i] = x * x * (lap - hnn) - x * ((n - 2) * j.grad[n] + 2.0 * pg.normal_vertical * dnu) +
                 pg.mean_h * x * dnu;
    }
    return out;
}

}  // namespace mmcf
