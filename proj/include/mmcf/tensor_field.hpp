#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "mmcf/sphere_grid.hpp"

namespace mmcf {

/// Covariant tensor field of a given rank, stored as orthonormal-frame components
/// (n^rank numbers per node, last index fastest).
class TensorField {
public:
    TensorField() = default;
    TensorField(int rank, int n, std::size_t nodes);

    int rank() const { return rank_; }
    int n() const { return n_; }
    std::size_t nodes() const { return nodes_; }
    std::size_t components() const { return comps_; }

    std::span<double> at(std::size_t node) { return {data_.data() + node * comps_, comps_}; }
    std::span<const double> at(std::size_t node) const { return {data_.data() + node * comps_, comps_}; }

    static TensorField from_sym2(const std::vector<Sym2>& s, int n);
    static TensorField from_scalar(const Field& f, int n);

private:
    int rank_ = 0;
    int n_ = 1;
    std::size_t nodes_ = 0;
    std::size_t comps_ = 1;
    std::vector<double> data_;
};

/// Levi-Civita derivative of the round metric: returns a field of rank + 1 whose first
/// index is the differentiation direction.
///
/// n = 1 differentiates components along the arc; axisymmetric grids use the frame
/// connection of (e_theta, e_phi) with the pole limit taken through the mirrored meridian;
/// full grids differentiate ambient components and project back to the tangent space.
TensorField sphere_covariant_derivative(const TensorField& t, const Grid& g, const DomainMask& mask);

}  // namespace mmcf
