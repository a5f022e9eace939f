#include "mmcf/sphere_grid.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <string>

namespace mmcf {

void GridSpec::validate() const {
    if (dim != 1 && dim != 2) {
        throw InvalidArgument("grid dimension must be 1 or 2, got " + std::to_string(dim));
    }
    if (dim == 1 && mode == GridMode::axisymmetric) {
        throw InvalidArgument("axisymmetric mode requires n = 2");
    }
    if (polar_nodes < 9) {
        throw InvalidArgument("grid needs at least 9 polar nodes, got " + std::to_string(polar_nodes));
    }
    if (dim == 2 && mode == GridMode::full && azimuth_nodes < 9) {
        throw InvalidArgument("full n = 2 grid needs at least 9 azimuthal nodes, got " +
                              std::to_string(azimuth_nodes));
    }
    if (!(theta_max > 0.0) || !(theta_max < std::numbers::pi / 2)) {
        throw InvalidArgument("theta_max must lie in (0, pi/2) so that y > 0 on the grid");
    }
}

Grid::Grid(const GridSpec& spec) : spec_(spec) {
    spec_.validate();
    if (spec_.dim == 1) {
        up_ = {0.0, 1.0, 0.0};
        build_1d();
    } else {
        up_ = {0.0, 0.0, 1.0};
        if (spec_.mode == GridMode::axisymmetric) {
            build_axisymmetric();
        } else {
            build_full();
        }
    }
    for (std::size_t i = 0; i < edge_.size(); ++i) {
        if (edge_[i]) edge_nodes_.push_back(static_cast<int>(i));
    }
}

Grid build_grid(const GridSpec& spec) { return Grid(spec); }

void Grid::build_1d() {
    const int n = spec_.polar_nodes;
    h_ = 2.0 * spec_.theta_max / (n - 1);
    h_phi_ = h_;
    z_.resize(n);
    y_.resize(n);
    frame_.resize(n);
    grad_y_.resize(n);
    coords_.resize(n);
    metric_.assign(n, Sym2{1.0, 0.0, 1.0});
    metric_inv_.assign(n, Sym2{1.0, 0.0, 1.0});
    christoffel_.assign(n, {0.0, 0.0});
    frame_spacing_.assign(n, {h_, h_});
    neighbors_.resize(n);
    edge_.assign(n, 0);
    for (int j = 0; j < n; ++j) {
        const double s = -spec_.theta_max + j * h_;
        z_[j] = {std::sin(s), std::cos(s), 0.0};
        y_[j] = std::cos(s);
        frame_[j] = {Vec3{std::cos(s), -std::sin(s), 0.0}, Vec3{0.0, 0.0, 0.0}};
        grad_y_[j] = {-std::sin(s), 0.0};
        coords_[j] = {s, 0.0};
        for (int k = 1; k <= 3; ++k) {
            neighbors_[j][0].plus[k - 1] = j + k < n ? j + k : -1;
            neighbors_[j][0].minus[k - 1] = j - k >= 0 ? j - k : -1;
        }
    }
    edge_[0] = 1;
    edge_[n - 1] = 1;
}

void Grid::build_axisymmetric() {
    const int n = spec_.polar_nodes;
    h_ = spec_.theta_max / (n - 1);
    h_phi_ = h_;
    pole_ = 0;
    z_.resize(n);
    y_.resize(n);
    frame_.resize(n);
    grad_y_.resize(n);
    coords_.resize(n);
    metric_.resize(n);
    metric_inv_.resize(n);
    christoffel_.resize(n);
    frame_spacing_.assign(n, {h_, h_});
    neighbors_.resize(n);
    edge_.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        const double th = i * h_;
        const double st = std::sin(th), ct = std::cos(th);
        z_[i] = {st, 0.0, ct};
        y_[i] = ct;
        frame_[i] = {Vec3{ct, 0.0, -st}, Vec3{0.0, 1.0, 0.0}};
        grad_y_[i] = {-st, 0.0};
        coords_[i] = {th, 0.0};
        if (i == 0) {
            metric_[i] = {1.0, 0.0, 1.0};
            metric_inv_[i] = {1.0, 0.0, 1.0};
            christoffel_[i] = {0.0, 0.0};
        } else {
            metric_[i] = {1.0, 0.0, st * st};
            metric_inv_[i] = {1.0, 0.0, 1.0 / (st * st)};
            christoffel_[i] = {-st * ct, ct / st};
        }
        for (int k = 1; k <= 3; ++k) {
            neighbors_[i][0].plus[k - 1] = i + k < n ? i + k : -1;
            neighbors_[i][0].minus[k - 1] = (i > 0 && i - k >= 0) ? i - k : -1;
        }
    }
    edge_[n - 1] = 1;
}

void Grid::build_full() {
    const int nt = spec_.polar_nodes;
    const int np = spec_.azimuth_nodes;
    h_ = spec_.theta_max / (nt - 1);
    h_phi_ = 2.0 * std::numbers::pi / np;
    pole_ = 0;
    const int total = 1 + (nt - 1) * np;
    z_.resize(total);
    y_.resize(total);
    frame_.resize(total);
    grad_y_.resize(total);
    coords_.resize(total);
    metric_.resize(total);
    metric_inv_.resize(total);
    christoffel_.resize(total);
    frame_spacing_.resize(total);
    neighbors_.resize(total);
    edge_.assign(total, 0);

    z_[0] = {0.0, 0.0, 1.0};
    y_[0] = 1.0;
    frame_[0] = {Vec3{1.0, 0.0, 0.0}, Vec3{0.0, 1.0, 0.0}};
    grad_y_[0] = {0.0, 0.0};
    coords_[0] = {0.0, 0.0};
    metric_[0] = {1.0, 0.0, 1.0};
    metric_inv_[0] = {1.0, 0.0, 1.0};
    christoffel_[0] = {0.0, 0.0};
    frame_spacing_[0] = {h_, h_};

    auto index = [np](int ring, int k) {
        if (ring == 0) return 0;
        const int kk = ((k % np) + np) % np;
        return 1 + (ring - 1) * np + kk;
    };
    for (int ring = 1; ring < nt; ++ring) {
        const double th = ring * h_;
        const double st = std::sin(th), ct = std::cos(th);
        for (int k = 0; k < np; ++k) {
            const double ph = k * h_phi_;
            const double sp = std::sin(ph), cp = std::cos(ph);
            const int i = index(ring, k);
            z_[i] = {st * cp, st * sp, ct};
            y_[i] = ct;
            frame_[i] = {Vec3{ct * cp, ct * sp, -st}, Vec3{-sp, cp, 0.0}};
            grad_y_[i] = {-st, 0.0};
            coords_[i] = {th, ph};
            metric_[i] = {1.0, 0.0, st * st};
            metric_inv_[i] = {1.0, 0.0, 1.0 / (st * st)};
            christoffel_[i] = {-st * ct, ct / st};
            frame_spacing_[i] = {h_, st * h_phi_};
            for (int off = 1; off <= 3; ++off) {
                neighbors_[i][0].plus[off - 1] = ring + off < nt ? index(ring + off, k) : -1;
                neighbors_[i][0].minus[off - 1] = ring - off >= 0 ? index(ring - off, k) : -1;
                neighbors_[i][1].plus[off - 1] = index(ring, k + off);
                neighbors_[i][1].minus[off - 1] = index(ring, k - off);
            }
            if (ring == nt - 1) edge_[i] = 1;
            if (ring == 1) pole_ring_.push_back(i);
        }
    }
}

std::vector<int> Grid::adjacent(std::size_t i) const {
    std::vector<int> out;
    if (is_pole(i)) {
        if (axisymmetric()) {
            out.push_back(1);
        } else {
            out.assign(pole_ring_.begin(), pole_ring_.end());
        }
        return out;
    }
    const int dirs = full2d() ? 2 : 1;
    for (int d = 0; d < dirs; ++d) {
        const auto& nb = neighbors_[i][d];
        if (nb.plus[0] >= 0) out.push_back(nb.plus[0]);
        if (nb.minus[0] >= 0) out.push_back(nb.minus[0]);
    }
    return out;
}

// ---------------------------------------------------------------------------

DomainMask DomainMask::whole(const Grid& g) {
    return from_inclusion(g, std::vector<std::uint8_t>(g.size(), 1));
}

DomainMask DomainMask::from_inclusion(const Grid& g, std::vector<std::uint8_t> include) {
    if (include.size() != g.size()) throw InvalidArgument("mask size does not match grid");
    DomainMask m;
    m.inside = std::move(include);
    m.boundary.assign(g.size(), 0);
    m.depth.assign(g.size(), -1);
    std::deque<int> queue;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!m.inside[i]) continue;
        bool bnd = g.on_edge(i);
        for (int j : g.adjacent(i)) {
            if (!m.inside[j]) bnd = true;
        }
        if (bnd) {
            m.boundary[i] = 1;
            m.depth[i] = 0;
            queue.push_back(static_cast<int>(i));
        }
    }
    if (m.count() == 0) throw InvalidArgument("domain mask is empty");
    if (m.interior_count() == 0) throw InvalidArgument("domain mask is degenerate: no interior nodes");

    while (!queue.empty()) {
        const int i = queue.front();
        queue.pop_front();
        for (int j : g.adjacent(i)) {
            if (m.inside[j] && m.depth[j] < 0) {
                m.depth[j] = m.depth[i] + 1;
                queue.push_back(j);
            }
        }
    }

    // edge-connectedness
    std::vector<std::uint8_t> seen(g.size(), 0);
    std::size_t first = 0;
    while (!m.inside[first]) ++first;
    std::deque<int> q{static_cast<int>(first)};
    seen[first] = 1;
    std::size_t reached = 1;
    while (!q.empty()) {
        const int i = q.front();
        q.pop_front();
        for (int j : g.adjacent(i)) {
            if (m.inside[j] && !seen[j]) {
                seen[j] = 1;
                ++reached;
                q.push_back(j);
            }
        }
    }
    if (reached != m.count()) throw InvalidArgument("domain mask is not edge-connected");
    return m;
}

std::size_t DomainMask::count() const {
    return static_cast<std::size_t>(std::count(inside.begin(), inside.end(), std::uint8_t{1}));
}

std::size_t DomainMask::interior_count() const {
    std::size_t c = 0;
    for (std::size_t i = 0; i < inside.size(); ++i) c += is_interior(i) ? 1 : 0;
    return c;
}

// ---------------------------------------------------------------------------

namespace detail {

DirectionalDerivative directional(const Field& f, std::size_t i, const Neighbors& nb, double h,
                                  const DomainMask& mask) {
    auto ok = [&](int j) { return j >= 0 && mask.inside[j]; };
    const double f0 = f[i];
    DirectionalDerivative d;
    if (ok(nb.plus[0]) && ok(nb.minus[0])) {
        const double fp = f[nb.plus[0]], fm = f[nb.minus[0]];
        d.first = (fp - fm) / (2.0 * h);
        d.second = (fp - 2.0 * f0 + fm) / (h * h);
        return d;
    }
    for (int sign : {+1, -1}) {
        const auto& side = sign > 0 ? nb.plus : nb.minus;
        if (ok(side[0]) && ok(side[1])) {
            const double f1 = f[side[0]], f2 = f[side[1]];
            d.first = sign * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h);
            if (ok(side[2])) {
                d.second = (2.0 * f0 - 5.0 * f1 + 4.0 * f2 - f[side[2]]) / (h * h);
            } else {
                d.second = (f0 - 2.0 * f1 + f2) / (h * h);
            }
            return d;
        }
    }
    if (ok(nb.plus[0])) d.first = (f[nb.plus[0]] - f0) / h;
    else if (ok(nb.minus[0])) d.first = (f0 - f[nb.minus[0]]) / h;
    return d;
}

}  // namespace detail

namespace {

void pole_full(const Field& f, const Grid& g, const DomainMask& mask, Tangent& grad, Sym2& hess) {
    const auto ring = g.pole_ring();
    const int np = static_cast<int>(ring.size());
    double mean = 0.0, c1 = 0.0, s1 = 0.0, c2 = 0.0, s2 = 0.0;
    for (int k = 0; k < np; ++k) {
        if (!mask.inside[ring[k]]) {
            throw InvalidArgument("the first ring around the pole must lie inside the mask");
        }
        const double ph = k * g.h_phi();
        const double fk = f[ring[k]] - f[0];
        mean += fk;
        c1 += fk * std::cos(ph);
        s1 += fk * std::sin(ph);
        c2 += fk * std::cos(2.0 * ph);
        s2 += fk * std::sin(2.0 * ph);
    }
    mean /= np;
    const double h = g.h();
    grad = {2.0 * c1 / (np * h), 2.0 * s1 / (np * h)};
    const double tr = 4.0 * mean / (h * h);
    const double diff = 4.0 * c2 / (np * h * h);
    const double off = 4.0 * s2 / (np * h * h);
    hess = {0.5 * tr + diff, off, 0.5 * tr - diff};
}

}  // namespace

ScalarDerivatives scalar_derivatives(const Field& f, const Grid& g, const DomainMask& mask) {
    if (f.size() != g.size()) throw InvalidArgument("field size does not match grid");
    const std::size_t n = g.size();
    ScalarDerivatives out;
    out.grad.assign(n, Tangent{0.0, 0.0});
    out.hess.assign(n, Sym2{});
    const double h = g.h();

    if (g.dim() == 1) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!mask.inside[i]) continue;
            const auto d = detail::directional(f, i, g.neighbors(i, 0), h, mask);
            out.grad[i] = {d.first, 0.0};
            out.hess[i] = {d.second, 0.0, 0.0};
        }
        return out;
    }

    if (g.axisymmetric()) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!mask.inside[i]) continue;
            if (g.is_pole(i)) {
                if (!mask.inside[1]) throw InvalidArgument("pole neighbor must lie inside the mask");
                const double b = 2.0 * (f[1] - f[0]) / (h * h);
                out.grad[i] = {0.0, 0.0};
                out.hess[i] = {b, 0.0, b};
                continue;
            }
            const auto d = detail::directional(f, i, g.neighbors(i, 0), h, mask);
            const double th = g.coords(i)[0];
            out.grad[i] = {d.first, 0.0};
            out.hess[i] = {d.second, 0.0, d.first * std::cos(th) / std::sin(th)};
        }
        return out;
    }

    // full n = 2: theta derivatives first, the mixed derivative differences them in phi
    Field dtheta(n, 0.0);
    Field dtheta2(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (!mask.inside[i] || g.is_pole(i)) continue;
        const auto d = detail::directional(f, i, g.neighbors(i, 0), h, mask);
        dtheta[i] = d.first;
        dtheta2[i] = d.second;
    }
    const double hp = g.h_phi();
    for (std::size_t i = 0; i < n; ++i) {
        if (!mask.inside[i]) continue;
        if (g.is_pole(i)) {
            pole_full(f, g, mask, out.grad[i], out.hess[i]);
            continue;
        }
        const auto dp = detail::directional(f, i, g.neighbors(i, 1), hp, mask);
        const double ftp = detail::directional(dtheta, i, g.neighbors(i, 1), hp, mask).first;
        const double th = g.coords(i)[0];
        const double st = std::sin(th), ct = std::cos(th);
        const double h_tt = dtheta2[i];
        const double h_tp = ftp - (ct / st) * dp.first;
        const double h_pp = dp.second + st * ct * dtheta[i];
        out.grad[i] = {dtheta[i], dp.first / st};
        out.hess[i] = {h_tt, h_tp / st, h_pp / (st * st)};
    }
    return out;
}

std::vector<Tangent> covariant_gradient(const Field& f, const Grid& g, const DomainMask& mask) {
    return scalar_derivatives(f, g, mask).grad;
}

std::vector<Tangent> covariant_gradient(const Field& f, const Grid& g) {
    return covariant_gradient(f, g, DomainMask::whole(g));
}

std::vector<Sym2> covariant_hessian(const Field& f, const Grid& g, const DomainMask& mask) {
    return scalar_derivatives(f, g, mask).hess;
}

std::vector<Sym2> covariant_hessian(const Field& f, const Grid& g) {
    return covariant_hessian(f, g, DomainMask::whole(g));
}

Field sphere_laplacian(const Field& f, const Grid& g, const DomainMask& mask) {
    const auto hess = covariant_hessian(f, g, mask);
    Field out(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = trace(hess[i], g.dim());
    return out;
}

DomainMask truncate_domain(const Field& v, const Grid& g, double epsilon) {
    if (v.size() != g.size()) throw InvalidArgument("height field size does not match grid");
    if (!(epsilon > 0.0)) throw InvalidArgument("truncation epsilon must be positive");
    std::vector<std::uint8_t> include(g.size(), 0);
    const double limit = (1.0 / epsilon) * (1.0 + 1e-12);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const Vec3 x = std::exp(v[i]) * g.z(i);
        const double height = x[g.dim()];
        include[i] = (height > 0.0 && norm(x) / height <= limit) ? 1 : 0;
    }
    return DomainMask::from_inclusion(g, std::move(include));
}

double lipschitz_constant(const Field& f, const Grid& g, const DomainMask& mask) {
    double best = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!mask.inside[i]) continue;
        for (int j : g.adjacent(i)) {
            if (j <= static_cast<int>(i) || !mask.inside[j]) continue;
            const double chord = norm(g.z(i) - g.z(j));
            const double arc = 2.0 * std::asin(std::min(1.0, 0.5 * chord));
            best = std::max(best, std::abs(f[j] - f[i]) / arc);
        }
    }
    return best;
}

}  // namespace mmcf
