#include "mmcf/tensor_field.hpp"

#include <cmath>

namespace mmcf {

namespace {

std::size_t ipow(int base, int exp) {
    std::size_t r = 1;
    for (int i = 0; i < exp; ++i) r *= static_cast<std::size_t>(base);
    return r;
}

// Digit s (0 = leading) of a multi-index in base n with k digits.
int digit(std::size_t idx, int s, int k, int n) {
    for (int r = k - 1; r > s; --r) idx /= n;
    return static_cast<int>(idx % n);
}

std::size_t flip_digit(std::size_t idx, int s, int k) {
    // base 2 only (axisymmetric frame swap theta <-> phi)
    const std::size_t bit = std::size_t{1} << (k - 1 - s);
    return idx ^ bit;
}

Field component(const TensorField& t, std::size_t c) {
    Field f(t.nodes());
    for (std::size_t i = 0; i < t.nodes(); ++i) f[i] = t.at(i)[c];
    return f;
}

TensorField derivative_1d(const TensorField& t, const Grid& g, const DomainMask& mask) {
    TensorField out(t.rank() + 1, 1, t.nodes());
    const Field f = component(t, 0);
    for (std::size_t i = 0; i < t.nodes(); ++i) {
        if (!mask.inside[i]) continue;
        out.at(i)[0] = detail::directional(f, i, g.neighbors(i, 0), g.h(), mask).first;
    }
    return out;
}

TensorField derivative_axisymmetric(const TensorField& t, const Grid& g, const DomainMask& mask) {
    const int k = t.rank();
    const std::size_t comps = t.components();
    TensorField out(k + 1, 2, t.nodes());
    const double h = g.h();

    std::vector<Field> fields(comps);
    for (std::size_t c = 0; c < comps; ++c) fields[c] = component(t, c);

    // (nabla_phi T)_a = -cot(theta) * sum_s sgn(a_s) T_{a with digit s swapped}
    auto phi_combination = [&](std::size_t a, auto&& value_of) {
        double acc = 0.0;
        for (int s = 0; s < k; ++s) {
            const int d = digit(a, s, k, 2);
            const double sgn = d == 0 ? 1.0 : -1.0;
            acc += sgn * value_of(flip_digit(a, s, k));
        }
        return -acc;
    };

    for (std::size_t i = 0; i < t.nodes(); ++i) {
        if (!mask.inside[i]) continue;
        auto o = out.at(i);
        if (g.is_pole(i)) {
            if (!mask.inside[1]) throw InvalidArgument("pole neighbor must lie inside the mask");
            // Mirror through the pole: components of rank k pick up (-1)^k, so the
            // centered theta-derivative is T(h)/h for odd k and zero for even k.
            std::vector<double> dtheta(comps, 0.0);
            if (k % 2 == 1) {
                for (std::size_t c = 0; c < comps; ++c) dtheta[c] = fields[c][1] / h;
            }
            for (std::size_t c = 0; c < comps; ++c) {
                o[c] = dtheta[c];
                o[comps + c] = phi_combination(c, [&](std::size_t b) { return dtheta[b]; });
            }
            continue;
        }
        const double th = g.coords(i)[0];
        const double cot = std::cos(th) / std::sin(th);
        for (std::size_t c = 0; c < comps; ++c) {
            o[c] = detail::directional(fields[c], i, g.neighbors(i, 0), h, mask).first;
            o[comps + c] = cot * phi_combination(c, [&](std::size_t b) { return fields[b][i]; });
        }
    }
    return out;
}

TensorField derivative_full(const TensorField& t, const Grid& g, const DomainMask& mask) {
    const int k = t.rank();
    const std::size_t comps = t.components();
    const std::size_t amb = ipow(3, k);
    const std::size_t nodes = t.nodes();

    // ambient components T^_alpha = sum_a T_a prod_s E_{a_s}^{alpha_s}
    std::vector<Field> ambient(amb, Field(nodes, 0.0));
    for (std::size_t i = 0; i < nodes; ++i) {
        if (!mask.inside[i]) continue;
        const auto& fr = g.frame(i);
        const auto ti = t.at(i);
        for (std::size_t al = 0; al < amb; ++al) {
            double acc = 0.0;
            for (std::size_t a = 0; a < comps; ++a) {
                double w = ti[a];
                for (int s = 0; s < k && w != 0.0; ++s) w *= fr[digit(a, s, k, 2)][digit(al, s, k, 3)];
                acc += w;
            }
            ambient[al][i] = acc;
        }
    }
    std::vector<std::vector<Tangent>> grads(amb);
    for (std::size_t al = 0; al < amb; ++al) grads[al] = covariant_gradient(ambient[al], g, mask);

    TensorField out(k + 1, 2, nodes);
    for (std::size_t i = 0; i < nodes; ++i) {
        if (!mask.inside[i]) continue;
        const auto& fr = g.frame(i);
        auto o = out.at(i);
        for (int c = 0; c < 2; ++c) {
            for (std::size_t a = 0; a < comps; ++a) {
                double acc = 0.0;
                for (std::size_t al = 0; al < amb; ++al) {
                    double w = grads[al][i][c];
                    for (int s = 0; s < k && w != 0.0; ++s) w *= fr[digit(a, s, k, 2)][digit(al, s, k, 3)];
                    acc += w;
                }
                o[c * comps + a] = acc;
            }
        }
    }
    return out;
}

}  // namespace

TensorField::TensorField(int rank, int n, std::size_t nodes)
    : rank_(rank), n_(n), nodes_(nodes), comps_(ipow(n, rank)), data_(nodes * comps_, 0.0) {}

TensorField TensorField::from_sym2(const std::vector<Sym2>& s, int n) {
    TensorField t(2, n, s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        auto o = t.at(i);
        if (n == 1) {
            o[0] = s[i].xx;
        } else {
            o[0] = s[i].xx;
            o[1] = s[i].xy;
            o[2] = s[i].xy;
            o[3] = s[i].yy;
        }
    }
    return t;
}

TensorField TensorField::from_scalar(const Field& f, int n) {
    TensorField t(0, n, f.size());
    for (std::size_t i = 0; i < f.size(); ++i) t.at(i)[0] = f[i];
    return t;
}

TensorField sphere_covariant_derivative(const TensorField& t, const Grid& g, const DomainMask& mask) {
    if (t.nodes() != g.size() || t.n() != g.dim()) throw InvalidArgument("tensor field does not match grid");
    if (g.dim() == 1) return derivative_1d(t, g, mask);
    if (g.axisymmetric()) return derivative_axisymmetric(t, g, mask);
    return derivative_full(t, g, mask);
}

}  // namespace mmcf
