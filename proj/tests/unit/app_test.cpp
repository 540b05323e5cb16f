#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "config.hpp"
#include "io.hpp"
#include "runners.hpp"

namespace ghsc::app {
namespace {

using nlohmann::json;

TEST(Io, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23, 0.075, 1e-300}) {
    const std::string s = format_double(v);
    EXPECT_EQ(std::strtod(s.c_str(), nullptr), v) << s;
    EXPECT_EQ(s.find(','), std::string::npos);
  }
  EXPECT_EQ(format_double(0.0), "0");
  EXPECT_EQ(format_double(-0.0), "0");
  EXPECT_EQ(format_double(0.25), "0.25");
  EXPECT_EQ(format_double(std::nan("")), "nan");
  EXPECT_EQ(format_double(-INFINITY), "-inf");
}

TEST(Io, CsvQuoting) {
  EXPECT_EQ(csv_field("plain"), "plain");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
  EXPECT_EQ(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
  EXPECT_EQ(csv_field("two\nlines"), "\"two\nlines\"");
}

TEST(Io, TableStampsEveryRow) {
  CsvTable t("x/1", "00000000deadbeef", {"a", "b"});
  CsvTable::Row r;
  r.add(0.5).add_na();
  t.push(std::move(r));
  CsvTable::Row bad;
  bad.add(1.0);
  EXPECT_THROW(t.push(std::move(bad)), Error);
  const std::string want = std::string("schema,tool_version,config_hash,a,b\r\nx/1,") + kToolVersion +
                           ",00000000deadbeef,0.5,NA\r\n";
  EXPECT_EQ(t.str(), want);
}

TEST(Io, Fnv1aReferenceValues) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
  EXPECT_EQ(hex64(0xabcULL), "0000000000000abc");
}

TEST(Io, AtomicWriteReplacesAndLeavesNoTemp) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "ghsc_app_test";
  fs::remove_all(dir);
  const std::string path = (dir / "sub" / "out.csv").string();
  write_atomic(path, "one");
  write_atomic(path, "two");
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  EXPECT_EQ(ss.str(), "two");
  std::size_t files = 0;
  for (const auto& e : fs::directory_iterator(dir / "sub")) files += e.is_regular_file();
  EXPECT_EQ(files, 1u);
  // A directory in the way: the rename fails and the temp file is cleaned up.
  fs::create_directories(dir / "blocked");
  fs::create_directories(dir / "blocked" / "x");
  EXPECT_ANY_THROW(write_atomic((dir / "blocked" / "x").string(), "data"));
  files = 0;
  for (const auto& e : fs::directory_iterator(dir / "blocked")) files += e.is_regular_file();
  EXPECT_EQ(files, 0u);
  fs::remove_all(dir);
}

TEST(Config, YamlTyping) {
  const json j = parse_yaml("a: 3\nb: 0.5\nc: '3'\nd: ~\ne: true\nf: [1, 2.5e-3]\ng: -7\n");
  EXPECT_TRUE(j["a"].is_number_integer());
  EXPECT_DOUBLE_EQ(j["b"].get<double>(), 0.5);
  EXPECT_TRUE(j["c"].is_string());
  EXPECT_TRUE(j["d"].is_null());
  EXPECT_TRUE(j["e"].get<bool>());
  EXPECT_DOUBLE_EQ(j["f"][1].get<double>(), 2.5e-3);
  EXPECT_EQ(j["g"].get<int>(), -7);
}

TEST(Config, GridForms) {
  const json j = parse_yaml("g: {start: 0, stop: 0.5, step: 0.025}\nh: [0.1, 0.3]\n");
  const auto g = read_grid(Node(&j["g"], "$.g"));
  ASSERT_EQ(g.size(), 21u);
  EXPECT_EQ(g[3], 0.075);
  EXPECT_EQ(g.back(), 0.5);
  EXPECT_EQ(read_grid(Node(&j["h"], "$.h")), (std::vector<double>{0.1, 0.3}));
}

std::string error_of(const std::string& yaml, bool mc = false) {
  try {
    const json j = parse_yaml(yaml);
    mc ? (void)parse_mc(j) : (void)parse_scan(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

TEST(Config, PathPreciseErrors) {
  const std::string base = "geometry: {lx: 3, ly: 2}\nj_grid: [0]\np_grid: [0.1]\n";
  EXPECT_EQ(error_of("geometry: {lx: 3}\nj_grid: [0]\np_grid: [0.1]\n"), "$.geometry.ly: required key missing");
  EXPECT_EQ(error_of("geometry: {lx: 3, ly: 2}\nj_grid: [0, 0.5, -1]\np_grid: [0.1]\n"),
            "$.j_grid[2]: J must be nonnegative");
  EXPECT_EQ(error_of(base + "colour: red\n"), "$.colour: unknown key");
  EXPECT_EQ(error_of(base + "sector: {lz: 0}\n"), "$.sector.lz: expected +1 or -1");
  EXPECT_EQ(error_of(base + "observables: [{name: a, plaquettes: [2, 9]}]\n"),
            "$.observables[0].plaquettes[1]: expected an integer in [0, 5], got 9");
  EXPECT_EQ(error_of(base + "observables: [{name: a, terms: [{pauli: Z3 Z3}]}]\n"),
            "$.observables[0].terms[0].pauli: qubit 3 appears twice");
  EXPECT_EQ(error_of("sizes: [8]\np_grid: [0.1]\nsweeps: 10\nthermalization: 100\n", true),
            "$.sweeps: must be at least the thermalization count (100)");
  EXPECT_EQ(error_of("sizes: [80]\np_grid: [0.1]\n", true), "$.sizes[0]: expected an integer in [2, 64], got 80");
}

TEST(Config, HashIgnoresWorkersAndOutput) {
  const std::string base = "geometry: {lx: 3, ly: 2}\nj_grid: [0, 0.5]\np_grid: {start: 0, stop: 0.5, step: 0.25}\n";
  const auto a = parse_scan(parse_yaml(base + "workers: 1\noutput: a.csv\n"));
  const auto b = parse_scan(parse_yaml(base + "workers: 7\noutput: elsewhere/b.csv\n"));
  const auto c = parse_scan(parse_yaml(base + "log_base: 2\n"));
  EXPECT_EQ(config_hash(a.normalized), config_hash(b.normalized));
  EXPECT_NE(config_hash(a.normalized), config_hash(c.normalized));
  // JSON and YAML spellings of the same config agree.
  const auto d = parse_scan(json::parse(
      R"({"geometry": {"lx": 3, "ly": 2}, "j_grid": [0, 0.5], "p_grid": {"start": 0, "stop": 0.5, "step": 0.25}})"));
  EXPECT_EQ(config_hash(a.normalized), config_hash(d.normalized));
}

TEST(Config, DefaultObservableIsCentralPair) {
  const auto s = parse_scan(parse_yaml("geometry: {lx: 3, ly: 2}\nj_grid: [0]\np_grid: [0.1]\n"));
  ASSERT_EQ(s.config.observables.size(), 1u);
  EXPECT_EQ(s.config.observables[0].name, "og");
  EXPECT_EQ(s.config.observables[0].op.terms().size(), 2u);
}

TEST(Config, StabilityCoupling) {
  const auto s = parse_stability(parse_yaml(
      "geometry: {lx: 3, ly: 2}\nj_grid: [0.5]\np_grid: [0.1]\ncoupling: {logical: Lx, plaquettes: [2, 3], dt: [0.01, "
      "0.05]}\n"));
  EXPECT_EQ(s.config.dts, (std::vector<double>{0.01, 0.05}));
  try {
    parse_stability(parse_yaml("geometry: {lx: 3, ly: 2}\nj_grid: [0.5]\np_grid: [0.1]\ncoupling: {logical: Lz}\n"));
    FAIL() << "L_z commutes with L_z";
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.path(), "$.coupling");
  }
}

TEST(Runners, ScanCsvMarksFailedRows) {
  auto spec = parse_scan(parse_yaml("geometry: {lx: 3, ly: 2}\nj_grid: [0.5]\np_grid: [0.1]\nchannel: {kraus_cap: 3}\n"));
  const auto out = run_scan(spec);
  EXPECT_EQ(out.status, kFailed);
  EXPECT_EQ(out.failed_rows, 1u);
  std::istringstream lines(out.csv);
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_NE(row.find(",error,"), std::string::npos);
  EXPECT_NE(row.find(",NA,"), std::string::npos);
  EXPECT_EQ(row.find(",,,"), std::string::npos);
}

TEST(Runners, OraclePairsAreSeededAndHalfInClass) {
  const auto g = build_geometry(3, 2);
  const auto a = oracle_pairs(g, 40, 5), b = oracle_pairs(g, 40, 5), c = oracle_pairs(g, 40, 6);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  for (std::size_t i = 0; i < a.size(); i += 2) EXPECT_TRUE(same_class(g, a[i].first, a[i].second));
}

}  // namespace
}  // namespace ghsc::app
