#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <string>
#include <string_view>
#include <vector>

#include "ghsc/channel.hpp"
#include "ghsc/errors.hpp"
#include "ghsc/rbim.hpp"
#include "ghsc/stability.hpp"

namespace ghsc::app {

// Schema violation; what() starts with the offending path, e.g. "$.p_grid.step".
class ConfigError : public Error {
 public:
  ConfigError(const std::string& path, const std::string& message) : Error(path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

// Read-only view of a config value that knows where it came from.
class Node {
 public:
  Node(const nlohmann::json* value, std::string path) : value_(value), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const nlohmann::json& raw() const { return *value_; }
  bool is_null() const { return value_->is_null(); }
  bool has(std::string_view key) const;
  Node at(std::string_view key) const;  // required key
  std::vector<Node> items() const;      // array elements

  double number() const;
  std::int64_t integer() const;
  std::size_t count(std::size_t min = 0, std::size_t max = SIZE_MAX) const;
  bool boolean() const;
  std::string string() const;
  // Throws on any key outside `allowed`.
  void allow_only(std::initializer_list<std::string_view> allowed) const;

  [[noreturn]] void fail(const std::string& message) const;

 private:
  const nlohmann::json* value_;
  std::string path_;
};

// YAML (.yaml/.yml, or anything not ending in .json) or JSON. YAML plain
// scalars are typed: null/~, true/false, integers, floats; quoted ones stay strings.
nlohmann::json load_config_file(const std::string& path);
nlohmann::json parse_yaml(const std::string& text);

// Grid: a list of numbers or {start, stop, step} with stop included.
std::vector<double> read_grid(const Node& n);

// Worker count: explicit value, else GHSC_WORKERS, else hardware concurrency.
std::size_t resolve_workers(const Node& root);

struct ScanSpec {
  std::string model = "TC";
  ScanConfig config;
  std::string output = "scan.csv";
  nlohmann::json normalized;  // everything that affects results
};

struct StabilitySpec {
  std::string model = "TC";
  StabilityConfig config;
  std::string output = "stability.csv";
  nlohmann::json normalized;
};

enum class McLine { kNishimori, kFixedBeta };

struct McSpec {
  McLine line = McLine::kNishimori;
  std::vector<std::size_t> sizes;
  std::vector<double> p_grid;
  std::vector<double> beta_grid;  // fixed-beta line only
  McOptions options;
  std::string output = "rbim_mc.csv";
  nlohmann::json normalized;

  std::vector<McPoint> points() const;
};

ScanSpec parse_scan(const nlohmann::json& root);
StabilitySpec parse_stability(const nlohmann::json& root);
McSpec parse_mc(const nlohmann::json& root);

// "Z3 Z7", "X0 Y2" (letter + qubit index, identity when empty) or a dense
// string accepted by PauliOperator::from_string.
PauliOperator parse_pauli(const Node& n, std::size_t num_qubits);

}  // namespace ghsc::app
