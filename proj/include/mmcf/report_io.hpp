#pragma once

#include <string>

#include <json.hpp>

#include "mmcf/flow_solver.hpp"
#include "mmcf/reports.hpp"
#include "mmcf/run_config.hpp"

namespace mmcf {

inline constexpr const char* kVersion = "0.1.0";

/// FNV-1a (64 bit) of the canonical key=value listing, as 16 hex digits.
std::string config_hash(const RunConfig& cfg);

/// `# mmcf <version> config_hash=<hash>`
std::string csv_header_line(const std::string& hash);

/// Writes to `<path>.tmp` and renames over `path`. Creates parent directories.
void write_atomic(const std::string& path, const std::string& content);

/// Rows `t,node_id,coord1[,coord2],v,w,H,A2,coshr,support` for every masked node of every snapshot.
std::string snapshot_csv(const Trajectory& traj, const Grid& g, const std::string& hash);

/// Shortest round-trip representation; "nan"/"inf" spelled out.
std::string format_number(double x);

nlohmann::json to_json(const ResidualReport& r);
nlohmann::json to_json(const MarginReport& r);
nlohmann::json to_json(const BoundReport& r);
nlohmann::json to_json(const ExhaustionReport& r);
nlohmann::json to_json(const RhsComparison& r);

/// Wraps a payload with version, config hash and the canonical configuration.
nlohmann::json report_document(const RunConfig& cfg, const std::string& hash, nlohmann::json payload);

}  // namespace mmcf
