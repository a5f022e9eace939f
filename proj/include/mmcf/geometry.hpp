#pragma once

#include <array>
#include <functional>
#include <vector>

#include "mmcf/sphere_grid.hpp"
#include "mmcf/tensor_field.hpp"

namespace mmcf {

/// Pointwise geometry of the radial graph x = e^v z at one node. Tensors are given in
/// the orthonormal sphere frame used as parameter coordinates.
struct PointGeometry {
    Vec3 x{};                     ///< embedding point e^v z
    double height = 0.0;          ///< x_{n+1}
    double w = 1.0;               ///< sqrt(1 + |grad v|^2)
    Vec3 normal{};                ///< Euclidean outward unit normal nu_E
    double normal_vertical = 0.0; ///< <nu_E, e>
    double cosh_r = 1.0;          ///< |x| / x_{n+1}
    double support_e = 0.0;       ///< <nu_E, x>_E
    double support_h = 0.0;       ///< <nu_H, x>_H
    Sym2 metric_e;                ///< induced Euclidean metric
    Sym2 metric_h;                ///< induced hyperbolic metric
    Sym2 metric_h_inv;
    Sym2 second_form_e;
    Sym2 second_form_h;
    std::array<double, 2> kappa_e{};
    std::array<double, 2> kappa_h{};
    double mean_e = 0.0;
    double mean_h = 0.0;
    double a2 = 0.0;              ///< |A|^2 in the hyperbolic metric
    double trace_a3 = 0.0;        ///< Tr(A^3)
    Tangent grad_v{};
    Sym2 hess_v;
};

/// Derived geometry of a height field on a masked grid. Nodes outside the mask hold
/// default-constructed entries.
struct SurfaceState {
    int n = 1;
    std::vector<PointGeometry> points;
    /// Difference tensor C^k_ij = Gamma(g)^k_ij - Gamma(gamma)^k_ij in frame components,
    /// stored at index k*4 + i*2 + j.
    std::vector<std::array<double, 8>> connection;
    double min_support = 0.0;
    double max_slope = 1.0;

    Field field(double PointGeometry::*member) const;
};

std::vector<Vec3> embed(const Field& v, const Grid& g);

struct SlopeAndNormal {
    Field w;
    std::vector<Vec3> normal;
};
SlopeAndNormal slope_and_normal(const Field& v, const Grid& g, const DomainMask& mask);
SlopeAndNormal slope_and_normal(const Field& v, const Grid& g);

/// cosh of the hyperbolic distance to the x_{n+1}-axis, |x|/x_{n+1}.
double cosh_radial(const Vec3& x, int n);

/// nabla^H_X Y - nabla^E_X Y at a point x of the half-space.
Vec3 connection_correction(const Vec3& X, const Vec3& Y, const Vec3& x, int n);

/// Hyperbolic isometric reflection x / |x|^2 through the unit hemisphere.
Vec3 reflect(const Vec3& x);

/// Full pointwise geometry at one node from the frame gradient and Hessian of v.
PointGeometry point_geometry(double v, const Tangent& p, const Sym2& q, const Grid& g, std::size_t i);

/// Hyperbolic mean curvature from the trace formula H = (y alpha:Q - n <grad v, grad y>)/w.
double mean_curvature_trace(const Tangent& p, const Sym2& q, double y, const Tangent& grad_y, int n);

SurfaceState curvature(const Field& v, const Grid& g, const DomainMask& mask);
SurfaceState curvature(const Field& v, const Grid& g);

/// Laplace-Beltrami operator of the induced hyperbolic metric, written with round-metric
/// covariant derivatives: g^{ij}(f_{;ij} - C^k_ij f_k). Exact on constants.
Field surface_laplace_beltrami(const Field& f, const SurfaceState& s, const Grid& g, const DomainMask& mask);

/// Levi-Civita derivative of the induced hyperbolic metric for a frame tensor field.
TensorField surface_covariant_derivative(const TensorField& t, const SurfaceState& s, const Grid& g,
                                         const DomainMask& mask);

/// Squared g-norm of the tensor stored at one node.
double tensor_norm2(const TensorField& t, const SurfaceState& s, std::size_t node);

/// Frame components of the surface gradient g^{ij} f_j.
Tangent raise_index(const Tangent& df, const PointGeometry& p, int n);

/// Value, Euclidean gradient and Hessian of an ambient function on the half-space.
struct AmbientJet {
    double value = 0.0;
    Vec3 grad{};
    std::array<Vec3, 3> hess{};
};
using AmbientFunction = std::function<AmbientJet(const Vec3&)>;

/// Surface Laplacian of an ambient function, expressed through Euclidean data:
/// x^2 (Delta_E f - D^2 f(nu,nu)) - x((n-2) <Df,e> + 2 nu^{n+1} <Df,nu>) + H x <Df,nu>.
Field extrinsic_laplace_beltrami(const AmbientFunction& f, const SurfaceState& s, const Grid& g,
                                 const DomainMask& mask);

}  // namespace mmcf
