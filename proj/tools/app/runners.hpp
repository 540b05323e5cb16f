#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"

namespace ghsc::app {

inline constexpr const char* kScanSchema = "ghsc.scan/1";
inline constexpr const char* kStabilitySchema = "ghsc.stability/1";
inline constexpr const char* kMcSchema = "ghsc.rbim-mc/1";
inline constexpr const char* kReportSchema = "ghsc.report/1";
inline constexpr const char* kManifestSchema = "ghsc.manifest/1";

// Exit statuses of the ghsc tool.
enum Status : int { kOk = 0, kFailed = 1, kUsage = 2, kRuntime = 3 };

struct Outcome {
  int status = kOk;
  nlohmann::json report;  // JSON subcommands: the report; CSV subcommands: a summary
  std::string schema;
  std::string csv;  // empty for JSON subcommands
  std::size_t rows = 0;
  std::size_t failed_rows = 0;
};

// Stamps schema, tool_version and config_hash into a JSON report.
nlohmann::json stamp(nlohmann::json report, const std::string& schema, const nlohmann::json& normalized);

nlohmann::json geometry_json(const LatticeGeometry& g);
Outcome run_geometry(std::size_t lx, std::size_t ly, bool ascii);

Outcome run_code_check(std::size_t lx, std::size_t ly, const std::string& model, bool gauge_out_noise);

struct MapVerifyOptions {
  std::size_t lx = 2, ly = 2;
  std::vector<double> j_values{0.0, 0.3, 0.7, 1.2};
  double tolerance = 1e-10;
  std::optional<std::string> dump_state;  // TC ground state at j_values[0]
};
Outcome run_map_verify(const MapVerifyOptions& o);

struct OracleOptions {
  std::size_t lx = 3, ly = 2;
  std::vector<double> p_values{0.05, 0.15, 0.3, 0.5};
  std::size_t samples = 200;
  std::uint64_t seed = 42;
  bool corrected = false;  // which identity decides the exit status
};
// Pairs: half with s' in the class of s, half independent.
std::vector<std::pair<std::uint64_t, std::uint64_t>> oracle_pairs(const LatticeGeometry& g, std::size_t samples,
                                                                  std::uint64_t seed);
struct OracleSummary {
  double p_x = 0.0;
  std::size_t pairs = 0, in_class = 0;
  std::size_t printed_pass = 0, corrected_pass = 0;
  double worst_printed = 0.0, worst_corrected = 0.0;
  std::uint64_t worst_s = 0, worst_s_prime = 0;  // printed identity
};
std::vector<OracleSummary> oracle_check(const OracleOptions& o);
Outcome run_rbim_oracle(const OracleOptions& o);

Outcome run_scan(const ScanSpec& spec);
Outcome run_stability(const StabilitySpec& spec);
Outcome run_mc(const McSpec& spec);

}  // namespace ghsc::app
