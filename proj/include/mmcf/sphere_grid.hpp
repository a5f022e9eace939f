#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mmcf/types.hpp"

namespace mmcf {

enum class GridMode { full, axisymmetric };

/// How to discretize the upper hemisphere (or the polar cap {theta <= theta_max}).
///
/// n = 1: `polar_nodes` nodes uniformly spaced in arc angle s on [-theta_max, theta_max],
///        z = (sin s, cos s).
/// n = 2: `polar_nodes` counts the pole plus the rings theta_i = i*h. In full mode each
///        ring carries `azimuth_nodes` points; in axisymmetric mode fields are functions
///        of theta alone and one node per ring is stored (on the meridian phi = 0).
struct GridSpec {
    int dim = 1;
    GridMode mode = GridMode::full;
    int polar_nodes = 65;
    int azimuth_nodes = 32;
    double theta_max = 1.2;

    void validate() const;
};

/// Neighbor indices along one coordinate direction, at offsets 1..3 (-1 when absent).
struct Neighbors {
    std::array<int, 3> plus{-1, -1, -1};
    std::array<int, 3> minus{-1, -1, -1};
};

/// Immutable discretization of S^n_+ with an orthonormal tangent frame at every node.
///
/// Differential operators return frame components, which are the covariant components
/// with respect to the round metric expressed in that orthonormal frame. Coordinate metric
/// components and Christoffel symbols are kept for the (theta, phi) chart.
class Grid {
public:
    explicit Grid(const GridSpec& spec);

    const GridSpec& spec() const { return spec_; }
    int dim() const { return spec_.dim; }
    GridMode mode() const { return spec_.mode; }
    bool axisymmetric() const { return spec_.dim == 2 && spec_.mode == GridMode::axisymmetric; }
    bool full2d() const { return spec_.dim == 2 && spec_.mode == GridMode::full; }
    std::size_t size() const { return z_.size(); }

    /// Unit vector in the positive x_{n+1} direction.
    const Vec3& up() const { return up_; }

    const Vec3& z(std::size_t i) const { return z_[i]; }
    double y(std::size_t i) const { return y_[i]; }
    /// Orthonormal frame E_a of T_z S^n, as ambient vectors.
    const std::array<Vec3, 2>& frame(std::size_t i) const { return frame_[i]; }
    /// Frame components of grad y, i.e. <E_a, e>.
    const Tangent& grad_y(std::size_t i) const { return grad_y_[i]; }
    /// Chart coordinates: s for n = 1, (theta, phi) for n = 2.
    const std::array<double, 2>& coords(std::size_t i) const { return coords_[i]; }

    /// Coordinate metric gamma_ij of the chart and its inverse (identity at the pole).
    const Sym2& metric(std::size_t i) const { return metric_[i]; }
    const Sym2& metric_inverse(std::size_t i) const { return metric_inv_[i]; }
    /// Nonzero Christoffel symbols of the (theta, phi) chart:
    /// {Gamma^theta_{phi phi}, Gamma^phi_{theta phi}}. Zero for n = 1 and at the pole.
    const std::array<double, 2>& christoffel(std::size_t i) const { return christoffel_[i]; }

    /// Frame-direction node spacings used for stability bounds.
    const Tangent& frame_spacing(std::size_t i) const { return frame_spacing_[i]; }

    double h() const { return h_; }
    double h_phi() const { return h_phi_; }

    const Neighbors& neighbors(std::size_t i, int direction) const { return neighbors_[i][direction]; }
    /// Index of the pole node for n = 2 (-1 for n = 1, where the pole is an ordinary node).
    int pole() const { return pole_; }
    bool is_pole(std::size_t i) const { return pole_ >= 0 && static_cast<int>(i) == pole_; }
    /// Ring-1 node indices around the pole (full mode), ordered by phi.
    std::span<const int> pole_ring() const { return pole_ring_; }

    bool on_edge(std::size_t i) const { return edge_[i] != 0; }
    std::span<const int> edge_nodes() const { return edge_nodes_; }

    /// Nodes adjacent in the discrete stencil graph (one step in any direction).
    std::vector<int> adjacent(std::size_t i) const;

private:
    GridSpec spec_;
    Vec3 up_{};
    std::vector<Vec3> z_;
    std::vector<double> y_;
    std::vector<std::array<Vec3, 2>> frame_;
    std::vector<Tangent> grad_y_;
    std::vector<std::array<double, 2>> coords_;
    std::vector<Sym2> metric_;
    std::vector<Sym2> metric_inv_;
    std::vector<std::array<double, 2>> christoffel_;
    std::vector<Tangent> frame_spacing_;
    std::vector<std::array<Neighbors, 2>> neighbors_;
    std::vector<std::uint8_t> edge_;
    std::vector<int> edge_nodes_;
    std::vector<int> pole_ring_;
    double h_ = 0.0;
    double h_phi_ = 0.0;
    int pole_ = -1;

    void build_1d();
    void build_axisymmetric();
    void build_full();
};

Grid build_grid(const GridSpec& spec);

/// Node subset on which a truncated problem is posed.
///
/// `boundary` marks included nodes that touch an excluded node or the grid edge; these
/// carry Dirichlet data. `depth` is the stencil-graph distance to the nearest boundary
/// node (0 on the boundary, -1 outside).
struct DomainMask {
    std::vector<std::uint8_t> inside;
    std::vector<std::uint8_t> boundary;
    std::vector<int> depth;

    static DomainMask whole(const Grid& g);
    /// Builds the mask from an inclusion predicate. Throws when empty, without interior
    /// nodes, or not edge-connected.
    static DomainMask from_inclusion(const Grid& g, std::vector<std::uint8_t> include);

    bool contains(std::size_t i) const { return inside[i] != 0; }
    bool is_interior(std::size_t i) const { return inside[i] != 0 && boundary[i] == 0; }
    std::size_t count() const;
    std::size_t interior_count() const;
};

/// Frame gradient and covariant Hessian of a scalar field (round metric).
struct ScalarDerivatives {
    std::vector<Tangent> grad;
    std::vector<Sym2> hess;
};

/// Second-order finite differences: centered where both neighbors are in the mask,
/// one-sided second order otherwise. Excluded nodes get zeros.
ScalarDerivatives scalar_derivatives(const Field& f, const Grid& g, const DomainMask& mask);
std::vector<Tangent> covariant_gradient(const Field& f, const Grid& g, const DomainMask& mask);
std::vector<Tangent> covariant_gradient(const Field& f, const Grid& g);
std::vector<Sym2> covariant_hessian(const Field& f, const Grid& g, const DomainMask& mask);
std::vector<Sym2> covariant_hessian(const Field& f, const Grid& g);

/// Squared gamma-norm of a frame vector.
inline double norm2(const Tangent& p, int n) { return n == 1 ? p[0] * p[0] : p[0] * p[0] + p[1] * p[1]; }

/// Intrinsic Laplacian gamma^{ij} f_{ij} on the sphere.
Field sphere_laplacian(const Field& f, const Grid& g, const DomainMask& mask);

/// Mask {cosh r(e^v z) <= 1/epsilon}, the radial trace of the solid cylinder |x|/x_{n+1} <= 1/epsilon.
DomainMask truncate_domain(const Field& v, const Grid& g, double epsilon);

/// Largest adjacent-node difference quotient (brute-force discrete Lipschitz constant)
/// measured in arc length, over edges with both ends in the mask.
double lipschitz_constant(const Field& f, const Grid& g, const DomainMask& mask);

namespace detail {
/// First and second derivative along one grid direction at node i.
struct DirectionalDerivative {
    double first = 0.0;
    double second = 0.0;
};
DirectionalDerivative directional(const Field& f, std::size_t i, const Neighbors& nb, double h,
                                  const DomainMask& mask);
}  // namespace detail

}  // namespace mmcf
