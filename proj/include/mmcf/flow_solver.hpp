#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mmcf/geometry.hpp"

namespace mmcf {

enum class RhsMode { parametric, normalized };
enum class BoundaryPolicy { frozen, prescribed };

/// Dirichlet data for the prescribed policy: value at (node, t).
using BoundaryData = std::function<double(std::size_t, double)>;

struct FlowConfig {
    double sigma = 0.0;
    RhsMode rhs_mode = RhsMode::parametric;
    /// Factor on the second-order term of the normalized law (1 or 1/n).
    double normalization = 1.0;
    double cfl = 0.4;
    double t0 = 0.0;
    double T = 1.0;
    /// Snapshot spacing; 0 keeps only the initial and final states.
    double cadence = 0.1;
    /// Explicit snapshot times in (t0, t0 + T]; overrides cadence when non-empty.
    std::vector<double> snapshot_times;
    /// Truncation parameter for the solid cylinder {cosh r <= 1/epsilon}; 0 disables it.
    double epsilon = 0.0;
    BoundaryPolicy boundary_policy = BoundaryPolicy::frozen;
    BoundaryData boundary_data;
    double dt_max = 0.0;
    double w_cap = 1e6;
    double growth_limit = 1e3;

    void validate(int n) const;
};

struct Snapshot {
    double t = 0.0;
    Field v;
    SurfaceState state;
};

struct TrajectoryEvent {
    double t = 0.0;
    std::string kind;
    std::string detail;
};

struct Trajectory {
    std::vector<Snapshot> snapshots;
    std::vector<double> dt_history;
    std::vector<TrajectoryEvent> events;
    DomainMask mask;
    double sigma = 0.0;
    bool terminated = false;

    const Snapshot& front() const { return snapshots.front(); }
    const Snapshot& back() const { return snapshots.back(); }
    std::size_t size() const { return snapshots.size(); }
};

/// Time derivative of v. Boundary nodes get the boundary policy's derivative, excluded
/// nodes get zero.
Field rhs(const Field& v, const Grid& g, const FlowConfig& cfg, const DomainMask& mask, double t = 0.0);
Field rhs(const Field& v, const Grid& g, const FlowConfig& cfg);

/// Largest y^2 lambda_max(alpha) over the mask, the principal coefficient of the scalar law.
double principal_coefficient(const SurfaceState& s, const Grid& g, const DomainMask& mask);

/// Explicit stability limit c_cfl / (2 max_i y^2 lambda_max(alpha) sum_a 1/h_a^2), capped by
/// the snapshot cadence and dt_max.
double stable_dt(const SurfaceState& s, const Grid& g, const FlowConfig& cfg, const DomainMask& mask);

/// One Heun (SSP-RK2) step from time t; Dirichlet values are reimposed at each stage.
Field step(const Field& v, double t, double dt, const Grid& g, const FlowConfig& cfg, const DomainMask& mask);

Trajectory evolve(const Field& v0, const FlowConfig& cfg, const Grid& g, const DomainMask& mask);
/// Uses the cylinder mask from cfg.epsilon (whole grid when epsilon is 0).
Trajectory evolve(const Field& v0, const FlowConfig& cfg, const Grid& g);

/// Biweight smoothing along the arc (n = 1) or the polar angle (axisymmetric), with odd
/// reflection at the outer edge so discrete Lipschitz constants do not grow.
Field mollify(const Field& v0, double scale, const Grid& g);

struct ExhaustionSchedule {
    std::vector<double> delta;
    std::vector<double> T;
    std::vector<double> epsilon;
};

ExhaustionSchedule schedule(const std::vector<double>& delta, int n, double sigma);

struct ExhaustionLevel {
    double delta = 0.0;
    double T = 0.0;
    double epsilon = 0.0;
    std::size_t mask_nodes = 0;
    std::size_t steps = 0;
};

struct ExhaustionComparison {
    std::size_t level = 0;  ///< compares level - 1 with level
    double sup_difference = 0.0;
    std::size_t common_nodes = 0;
    std::size_t common_times = 0;
};

struct ExhaustionReport {
    std::vector<ExhaustionLevel> levels;
    std::vector<ExhaustionComparison> comparisons;
    double theta = 0.5;
    double inner_cosh = 0.0;
};

/// Solves the truncated problems with frozen data from v0 and compares consecutive levels on
/// {cosh r <= theta / epsilon_{k-1}} x [0, T_{k-1}], further restricted to {cosh r <= inner_cosh}
/// when inner_cosh > 0.
ExhaustionReport exhaustion_run(const Field& v0, const ExhaustionSchedule& sched, const FlowConfig& cfg,
                                const Grid& g, double theta = 0.5, double inner_cosh = 0.0);

/// Parametric rhs against the normalized rhs with a given normalization c.
///
/// The difference decomposes exactly as (1 - c) S - (n - 1) D with S = y^2 alpha:Q and
/// D = y <grad v, grad y>; decomposition_error measures how far the computed difference is
/// from that prediction.
struct RhsComparison {
    double normalization = 1.0;
    double max_abs_difference = 0.0;
    double max_abs_parametric = 0.0;
    double max_abs_second_order = 0.0;
    double max_abs_drift = 0.0;
    double predicted_max_difference = 0.0;
    double decomposition_error = 0.0;
    /// Ratio of second-order terms normalized/parametric (equals c where S is nonzero).
    double second_order_ratio = 1.0;
};

RhsComparison compare_rhs(const Field& v, const Grid& g, double sigma, double normalization,
                          const DomainMask& mask);

}  // namespace mmcf
