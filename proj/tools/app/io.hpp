#pragma once

#include <cstdint>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ghsc::app {

extern const char* const kToolVersion;
inline constexpr const char* kNa = "NA";

// Shortest decimal that round-trips, '.' separator regardless of locale.
// NaN and infinities become "nan", "inf", "-inf".
std::string format_double(double v);

// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t v);

// RFC 4180: fields with a comma, quote, CR or LF are quoted, quotes doubled.
std::string csv_field(std::string_view s);

class CsvTable {
 public:
  // Every row starts with schema, tool_version and config_hash columns.
  CsvTable(std::string schema, std::string config_hash, std::vector<std::string> columns);

  class Row {
   public:
    Row& add(std::string_view text);
    Row& add(double v);
    Row& add(std::size_t v);
    Row& add(int v);
    Row& add_na();
    Row& add(const std::optional<double>& v) { return v ? add(*v) : add_na(); }

   private:
    friend class CsvTable;
    std::vector<std::string> fields_;
  };

  // Throws Error when the row length differs from the header.
  void push(Row row);
  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& columns() const { return columns_; }
  std::string str() const;

 private:
  std::string schema_;
  std::string hash_;
  std::vector<std::string> columns_;
  std::vector<std::string> rows_;
};

// Writes path.tmp.<pid> and renames it over path; the temp file is removed if
// anything fails. Creates missing parent directories.
void write_atomic(const std::string& path, std::string_view content);

// Canonical form used for hashing: sorted keys, no whitespace.
std::string canonical_dump(const nlohmann::json& j);
std::string config_hash(const nlohmann::json& normalized);

// UTC, ISO 8601.
std::string utc_timestamp();

}  // namespace ghsc::app
