#pragma once

#include <cmath>

#include "mmcf/sphere_grid.hpp"

namespace test {

inline mmcf::Grid line(int nodes, double theta_max = 1.2) {
    return mmcf::Grid(mmcf::GridSpec{1, mmcf::GridMode::full, nodes, 8, theta_max});
}
inline mmcf::Grid axi(int nodes, double theta_max = 1.2) {
    return mmcf::Grid(mmcf::GridSpec{2, mmcf::GridMode::axisymmetric, nodes, 8, theta_max});
}
inline mmcf::Grid full(int nodes, int azimuth, double theta_max = 1.2) {
    return mmcf::Grid(mmcf::GridSpec{2, mmcf::GridMode::full, nodes, azimuth, theta_max});
}

/// Max of |f(i)| over interior mask nodes, optionally skipping nodes within `margin` (arc length)
/// of the grid edge.
template <class F>
double max_interior(const mmcf::Grid& g, const mmcf::DomainMask& m, F f, double margin = 0.0) {
    double e = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (!m.is_interior(i)) continue;
        const double polar = g.dim() == 1 ? std::abs(g.coords(i)[0]) : g.coords(i)[0];
        if (polar > g.spec().theta_max - margin) continue;
        e = std::max(e, std::abs(f(i)));
    }
    return e;
}

inline double order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace test
