#include "io.hpp"

#include <unistd.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "ghsc/errors.hpp"

#ifndef GHSC_VERSION
#define GHSC_VERSION "0.0.0"
#endif

namespace ghsc::app {

const char* const kToolVersion = GHSC_VERSION;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error("number formatting failed");
  return std::string(buf, end);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvTable::CsvTable(std::string schema, std::string config_hash, std::vector<std::string> columns)
    : schema_(std::move(schema)), hash_(std::move(config_hash)) {
  columns_ = {"schema", "tool_version", "config_hash"};
  columns_.insert(columns_.end(), columns.begin(), columns.end());
}

CsvTable::Row& CsvTable::Row::add(std::string_view text) {
  fields_.push_back(csv_field(text));
  return *this;
}
CsvTable::Row& CsvTable::Row::add(double v) {
  fields_.push_back(format_double(v));
  return *this;
}
CsvTable::Row& CsvTable::Row::add(std::size_t v) {
  fields_.push_back(std::to_string(v));
  return *this;
}
CsvTable::Row& CsvTable::Row::add(int v) {
  fields_.push_back(std::to_string(v));
  return *this;
}
CsvTable::Row& CsvTable::Row::add_na() {
  fields_.emplace_back(kNa);
  return *this;
}

void CsvTable::push(Row row) {
  if (row.fields_.size() + 3 != columns_.size())
    throw Error("csv row has " + std::to_string(row.fields_.size() + 3) + " fields, header has " +
                std::to_string(columns_.size()));
  std::string line = csv_field(schema_) + "," + csv_field(kToolVersion) + "," + hash_;
  for (const auto& f : row.fields_) line += "," + f;
  rows_.push_back(std::move(line));
}

std::string CsvTable::str() const {
  std::string out;
  for (std::size_t i = 0; i < columns_.size(); ++i) out += (i ? "," : "") + csv_field(columns_[i]);
  out += "\r\n";
  for (const auto& r : rows_) out += r + "\r\n";
  return out;
}

void write_atomic(const std::string& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp." + std::to_string(::getpid());
  try {
    {
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      if (!f) throw Error("cannot open " + tmp.string() + " for writing");
      f.write(content.data(), static_cast<std::streamsize>(content.size()));
      f.flush();
      if (!f) throw Error("write to " + tmp.string() + " failed");
    }
    fs::rename(tmp, target);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

std::string canonical_dump(const nlohmann::json& j) { return j.dump(); }

std::string config_hash(const nlohmann::json& normalized) { return hex64(fnv1a64(canonical_dump(normalized))); }

std::string utc_timestamp() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace ghsc::app
