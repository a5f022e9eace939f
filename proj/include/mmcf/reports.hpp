#pragma once

#include <string>
#include <vector>

namespace mmcf {

/// Identity check result: worst residual over interior nodes and interior times.
struct ResidualReport {
    std::string name;
    double max_residual = 0.0;  ///< scaled residual
    double raw_residual = 0.0;
    double scale = 1.0;
    double max_lhs = 0.0;
    double max_rhs = 0.0;
    std::size_t nodes_checked = 0;
    std::size_t times_checked = 0;
    std::size_t worst_node = 0;
    double worst_time = 0.0;
    double h = 0.0;
    double dt = 0.0;
    double tolerance = 0.0;
    bool passed = false;
    std::string note;
};

/// Inequality or ordering check result: worst margin (lhs - rhs, or v2 - v1 for orderings).
struct MarginReport {
    std::string name;
    double worst_margin = 0.0;
    double tolerance = 0.0;
    std::size_t points_checked = 0;
    double worst_time = 0.0;
    std::size_t worst_node = 0;
    bool skipped = false;
    bool passed = false;
    std::string note;
};

struct BoundSample {
    double t = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    std::vector<double> factors;
};

/// Bound monitor result: per-time lhs against rhs, or empirical constant series.
struct BoundReport {
    std::string name;
    std::vector<BoundSample> samples;
    std::vector<std::string> factor_names;
    double worst_ratio = 0.0;
    bool set_emptied = false;
    bool passed = false;
    std::string note;
};

}  // namespace mmcf
