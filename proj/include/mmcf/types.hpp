#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace mmcf {

/// Ambient vector. Hypersurfaces of dimension n live in R^{n+1}; for n = 1
/// the third component is always zero.
using Vec3 = std::array<double, 3>;

/// Components of a tangent vector in an orthonormal frame of the sphere.
/// Only the first component is meaningful when n = 1.
using Tangent = std::array<double, 2>;

/// Scalar samples on grid nodes (height fields, derived scalars).
using Field = std::vector<double>;

/// Symmetric 2x2 tensor in an orthonormal frame. For n = 1 only xx is used.
struct Sym2 {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;

    double operator()(int i, int j) const {
        if (i == 0 && j == 0) return xx;
        if (i == 1 && j == 1) return yy;
        return xy;
    }
};

inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }

// Small dense helpers for n <= 2 tensors stored as Sym2.

inline double trace(const Sym2& m, int n) { return n == 1 ? m.xx : m.xx + m.yy; }
inline double det(const Sym2& m, int n) { return n == 1 ? m.xx : m.xx * m.yy - m.xy * m.xy; }

inline Sym2 inverse(const Sym2& m, int n) {
    if (n == 1) return {1.0 / m.xx, 0.0, 0.0};
    const double d = det(m, 2);
    return {m.yy / d, -m.xy / d, m.xx / d};
}

/// Full contraction sum_ij a^{ij} b_{ij}.
inline double contract(const Sym2& a, const Sym2& b, int n) {
    if (n == 1) return a.xx * b.xx;
    return a.xx * b.xx + 2.0 * a.xy * b.xy + a.yy * b.yy;
}

/// Product a*b*c of symmetric matrices, symmetrised (exact when the product is symmetric).
inline Sym2 sandwich(const Sym2& a, const Sym2& b, const Sym2& c, int n) {
    if (n == 1) return {a.xx * b.xx * c.xx, 0.0, 0.0};
    const double m[2][2] = {{a.xx, a.xy}, {a.xy, a.yy}};
    const double q[2][2] = {{b.xx, b.xy}, {b.xy, b.yy}};
    const double r[2][2] = {{c.xx, c.xy}, {c.xy, c.yy}};
    double mq[2][2] = {};
    double out[2][2] = {};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) mq[i][j] += m[i][k] * q[k][j];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) out[i][j] += mq[i][k] * r[k][j];
    return {out[0][0], 0.5 * (out[0][1] + out[1][0]), out[1][1]};
}

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition or parameter invariant was violated.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// The radial graph condition <nu_E, x>_E > 0 failed or the slope exceeded its cap.
class GraphConditionError : public Error {
public:
    using Error::Error;
};

/// Time stepping produced NaN or unbounded growth.
class InstabilityError : public Error {
public:
    using Error::Error;
};

}  // namespace mmcf
