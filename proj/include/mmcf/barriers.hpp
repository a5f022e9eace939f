#pragma once

#include <string>

#include "mmcf/flow_solver.hpp"
#include "mmcf/reports.hpp"

namespace mmcf {

enum class BarrierKind { hemisphere, horosphere, cap };

/// Exact barrier hypersurfaces: geodesic hemisphere |x| = r, horosphere x_{n+1} = c0, and
/// the sigma-cap, the Euclidean sphere of radius r centered at -sigma r/n e.
struct BarrierSpec {
    BarrierKind kind = BarrierKind::hemisphere;
    double c0 = 1.0;
    double r = 1.0;
    double sigma = 0.0;
    int n = 1;

    void validate() const;
};

BarrierKind parse_barrier_kind(const std::string& name);
std::string to_string(BarrierKind kind);

struct CapField {
    Field v;
    DomainMask mask;
};

/// Radial height of the cap: the positive root of rho^2 + 2 rho y sigma r/n - r^2(1 - sigma^2/n^2).
CapField cap_field(const BarrierSpec& spec, const Grid& g);

/// v = log c0 - log y + (n - sigma) t.
Field horosphere_field(double c0, double t, double sigma, const Grid& g);

/// v = log r.
Field hemisphere_field(double r, const Grid& g);

/// Height field of any barrier kind at time t (caps and hemispheres are static).
Field barrier_field(const BarrierSpec& spec, const Grid& g, double t = 0.0);

/// Order preservation at the height level: min over common times and nodes of v2 - v1.
MarginReport comparison_check(const Trajectory& lower, const Trajectory& upper, double tolerance = 1e-8);

}  // namespace mmcf
