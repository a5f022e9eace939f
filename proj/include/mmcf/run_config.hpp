#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mmcf/barriers.hpp"
#include "mmcf/estimates.hpp"
#include "mmcf/flow_solver.hpp"

namespace mmcf {

enum class Command { simulate, verify, exhaust, barriers, convergence };

Command parse_command(const std::string& name);
std::string to_string(Command c);

/// Parsed run configuration. `initial` is a barrier name (hemisphere, horosphere, cap),
/// `cone`, `perturbed_cap`, `file:<path>` or an expression in s, theta, phi, y, z1, z2, z3.
struct RunConfig {
    Command command = Command::simulate;
    int n = 1;
    GridMode mode = GridMode::axisymmetric;
    int resolution = 257;
    int azimuth_nodes = 0;  ///< full mode; 0 picks 2*(resolution-1)
    double theta_max = 1.2;
    double sigma = 0.0;
    RhsMode rhs_mode = RhsMode::parametric;
    double normalization = 1.0;
    double cfl = 0.4;
    double T = 1.0;
    double cadence = 0.1;
    double epsilon = 0.0;
    std::vector<double> schedule;
    BoundaryPolicy boundary_policy = BoundaryPolicy::frozen;
    std::string initial = "hemisphere";
    std::string output_dir = "mmcf_out";
    double radius = 1.0;
    double c0 = 1.0;
    double perturbation = 0.0;
    double slope = 0.5;  ///< cone: v = log(radius) - slope * polar angle
    double cosh_R = 2.0;
    double cutoff_theta = 0.5;
    double mollify_scale = 0.0;
    double w_cap = 1e6;
    double tolerance = 1e-2;
    /// Arc-length exclusions from the mask boundary and the pole for the pointwise checks.
    double margin = 0.15;
    double pole_margin = 0.15;
    std::uint64_t seed = 1;

    /// Canonical key=value listing, one per line in key order; the hash input.
    std::map<std::string, std::string> entries;

    GridSpec grid_spec() const;
    /// Exact horosphere Dirichlet data is attached under the prescribed policy.
    FlowConfig flow_config(const Grid& g) const;
    BarrierSpec barrier_spec() const;
    CutoffParams cutoff_params() const;
    /// Re-validates the cross-module invariants; throws InvalidArgument.
    void validate() const;
};

/// Parses flat `key = value` text. `#` starts a comment. Unknown keys, bad values and
/// invariant violations throw InvalidArgument with the line number.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Applies --resolution-override k: polar nodes become (resolution-1)*2^k + 1.
void apply_resolution_override(RunConfig& cfg, int k);

/// Initial height field on grid g, mollified when mollify_scale > 0.
Field initial_field(const RunConfig& cfg, const Grid& g);

}  // namespace mmcf
