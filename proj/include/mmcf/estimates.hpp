#pragma once

#include <string>
#include <vector>

#include "mmcf/flow_solver.hpp"
#include "mmcf/reports.hpp"

namespace mmcf {

/// Parameters of the cut-off functions and interior estimates.
struct CutoffParams {
    double cosh_R = 2.0;
    double theta = 0.5;
    double T = 1.0;
    double sigma = 0.0;
    int n = 1;
    /// k = (2 sup u^2)^{-1} over {r <= R} x [0, T]; filled by calibrate_cutoff.
    double k = 0.0;
    /// Lower bound c0 <= |x|^{-2} <= phi; filled by calibrate_cutoff.
    double c0 = 0.0;

    /// Admissibility for the gradient estimate:
    /// cosh R >= sigma/(n+sigma) e^{(n+sigma)T} and theta in (sigma e^{(n+sigma)T}/((n+sigma)cosh R), 1).
    void validate_gradient() const;
    /// Admissibility for the curvature estimates: cosh R >= n, theta in (0, 1), sigma >= 0.
    void validate_curvature() const;
};

/// Space-time cut-off cosh R - e^{(n+sigma)t}(cosh r + sigma/(n+sigma)).
double eta_cutoff(const CutoffParams& params, double cosh_r, double t);

/// Computes k and c0 from the trajectory restricted to {cosh r <= cosh R} x [0, T].
CutoffParams calibrate_cutoff(const Trajectory& traj, const Grid& g, CutoffParams params);

/// (d/dt - Delta) q at snapshot `index`, with d/dt the derivative along the normal motion:
/// a three-point time difference at fixed z minus the tangential transport v_t <grad v, grad q>/w^2.
Field heat_operator_numeric(const std::vector<Field>& q, const Trajectory& traj, std::size_t index, const Grid& g);

/// Short trajectory with one snapshot per step of size dt, for the time differences of the
/// identity checks. Overrides cfg.T, cfg.cadence and cfg.dt_max.
Trajectory identity_trajectory(const Field& v0, FlowConfig cfg, const Grid& g, const DomainMask& mask, double dt,
                               int steps = 4);

/// Node selection: mask depth >= min_depth, arc distance from the mask boundary >= margin, and
/// (n = 2) polar angle >= pole_margin.
struct IdentityOptions {
    int min_depth = 2;
    double margin = 0.0;
    double pole_margin = 0.0;
    double tolerance = 1e-2;
};

/// Names: coshr, nu_h_support, nu_e_support, simons, A_evolution.
const std::vector<std::string>& identity_names();
ResidualReport check_identity(const std::string& name, const Trajectory& traj, const Grid& g,
                              const IdentityOptions& opt = {});

struct InequalityOptions {
    int min_depth = 2;
    double margin = 0.0;
    double pole_margin = 0.0;
    /// Allowed positive margin (scaled units).
    double tau = 0.0;
};

/// Names: eta_spacetime, xi, A_phi. Margins are lhs - rhs, scaled by max(1, |lhs|, |rhs|).
const std::vector<std::string>& inequality_names();
MarginReport check_inequality(const std::string& name, const Trajectory& traj, const Grid& g,
                              const CutoffParams& params, const InequalityOptions& opt = {});

/// sup w over {e^{(n+sigma)t}(cosh r + sigma/(n+sigma)) <= theta cosh R} against
/// e^{(n+2)t + v_osc}(1-theta)^{-3} sup_0 w over {r <= R}.
BoundReport verify_gradient_bound(const Trajectory& traj, const Grid& g, const CutoffParams& params);

/// Empirical constants sup|nabla^m A|^2 / [(1+1/t)^{m+1}(1-theta)^{-2} sup_{s<=t} sup u^4] over
/// {cosh r <= theta cosh R}. Factors per sample: (1+1/t)^{m+1}, (1-theta)^{-2}, sup u^4 and,
/// for m >= 1, the extra (1+1/t) of the printed product.
BoundReport verify_curvature_bounds(const Trajectory& traj, const Grid& g, const CutoffParams& params, int m);

/// log(coarse/fine)/log(ratio).
double observed_order(double coarse, double fine, double ratio = 2.0);

}  // namespace mmcf
