// ghsc: command-line front end. Run `ghsc <subcommand> --help` for options.

#include <CLI11.hpp>
#include <chrono>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "config.hpp"
#include "ghsc/parallel.hpp"
#include "io.hpp"
#include "runners.hpp"

namespace app = ghsc::app;
using nlohmann::json;

namespace {

struct Common {
  std::optional<std::string> out;
};

void emit_report(const app::Outcome& o, const std::optional<std::string>& out) {
  const std::string text = o.report.dump(2) + "\n";
  if (out) app::write_atomic(*out, text);
  std::cout << text;
}

// CSV plus manifest next to it.
void emit_table(const app::Outcome& o, const std::string& subcommand, const std::string& path, const json& normalized,
                std::size_t workers, const std::string& started, double seconds) {
  app::write_atomic(path, o.csv);
  json manifest{{"schema", app::kManifestSchema},
                {"tool_version", app::kToolVersion},
                {"config_hash", app::config_hash(normalized)},
                {"subcommand", subcommand},
                {"config", normalized},
                {"workers", workers},
                {"started_utc", started},
                {"elapsed_seconds", seconds},
                {"exit_status", o.status},
                {"outputs",
                 {{{"path", path},
                   {"schema", o.schema},
                   {"rows", o.rows},
                   {"failed_rows", o.failed_rows},
                   {"fnv1a64", app::hex64(app::fnv1a64(o.csv))}}}}};
  app::write_atomic(path + ".manifest.json", manifest.dump(2) + "\n");
  json summary = o.report;
  summary["output"] = path;
  summary["manifest"] = path + ".manifest.json";
  summary["elapsed_seconds"] = seconds;
  std::cout << summary.dump(2) << "\n";
}

template <class F>
int timed_table(const std::string& subcommand, const std::string& path, const json& normalized, std::size_t workers,
                F&& run) {
  const std::string started = app::utc_timestamp();
  const auto t0 = std::chrono::steady_clock::now();
  const app::Outcome o = run();
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  emit_table(o, subcommand, path, normalized, workers, started, seconds);
  return o.status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Gauge-Higgs subsystem code numerical lab"};
  cli.set_version_flag("--version", app::kToolVersion);
  cli.require_subcommand(1);

  // geometry
  std::size_t g_lx = 3, g_ly = 2;
  bool g_ascii = false;
  std::optional<std::string> g_out;
  auto* geo = cli.add_subcommand("geometry", "Lattice ids, incidences and link classes as JSON");
  geo->add_option("--lx", g_lx, "vertex columns")->check(CLI::Range(2, 16));
  geo->add_option("--ly", g_ly, "vertex rows")->check(CLI::Range(1, 16));
  geo->add_flag("--ascii", g_ascii, "include an ASCII drawing");
  geo->add_option("--out", g_out, "also write the JSON here");

  // code-check
  std::size_t c_lx = 3, c_ly = 2;
  std::string c_model = "both";
  bool c_gauge_out = false;
  std::optional<std::string> c_out;
  auto* code = cli.add_subcommand("code-check", "Verify the LGHM and toric code structures");
  code->add_option("--lx", c_lx)->check(CLI::Range(2, 16));
  code->add_option("--ly", c_ly)->check(CLI::Range(1, 16));
  code->add_option("--model", c_model)->check(CLI::IsMember({"lghm", "tc", "both"}));
  code->add_flag("--gauge-out", c_gauge_out, "also gauge out sigma^x noise on every non-smooth link");
  code->add_option("--out", c_out);

  // map-verify
  app::MapVerifyOptions m;
  std::vector<double> m_j;
  std::optional<std::string> m_dump, m_out;
  auto* map = cli.add_subcommand("map-verify", "Check the LGHM to toric-code Clifford mapping");
  map->add_option("--lx", m.lx)->check(CLI::Range(2, 16));
  map->add_option("--ly", m.ly)->check(CLI::Range(1, 16));
  map->add_option("--j", m_j, "couplings (default 0 0.3 0.7 1.2)")->delimiter(',')->check(CLI::NonNegativeNumber);
  map->add_option("--tolerance", m.tolerance)->check(CLI::PositiveNumber);
  map->add_option("--dump-state", m_dump, "write the toric-code ground state at the first J (binary)");
  map->add_option("--out", m_out);

  // scan / stability
  std::string s_config;
  std::optional<std::size_t> s_workers;
  std::optional<std::string> s_output;
  auto* scan = cli.add_subcommand("scan", "Entropy, purity and variance over a (J, p_x) grid");
  scan->add_option("--config", s_config, "YAML or JSON config")->required()->check(CLI::ExistingFile);
  scan->add_option("--workers", s_workers)->check(CLI::Range(1, 1024));
  scan->add_option("--output", s_output, "CSV path (overrides the config)");

  std::string t_config;
  std::optional<std::size_t> t_workers;
  std::optional<std::string> t_output;
  auto* stab = cli.add_subcommand("stability", "Logical deviation F, exact and cumulant");
  stab->add_option("--config", t_config)->required()->check(CLI::ExistingFile);
  stab->add_option("--workers", t_workers)->check(CLI::Range(1, 1024));
  stab->add_option("--output", t_output);

  // rbim-oracle
  app::OracleOptions o;
  std::vector<double> o_p;
  std::string o_identity = "printed";
  std::optional<std::string> o_out;
  auto* orc = cli.add_subcommand("rbim-oracle", "Compare channel matrix elements with the RBIM identity");
  orc->add_option("--lx", o.lx)->check(CLI::Range(2, 4));
  orc->add_option("--ly", o.ly)->check(CLI::Range(1, 3));
  orc->add_option("--p", o_p, "p_x values (default 0.05,0.15,0.3,0.5)")->delimiter(',')->check(CLI::Range(0.0, 0.5));
  orc->add_option("--samples", o.samples)->check(CLI::Range(1, 1000000));
  orc->add_option("--seed", o.seed);
  orc->add_option("--identity", o_identity, "which identity sets the exit status")
      ->check(CLI::IsMember({"printed", "corrected"}));
  orc->add_option("--out", o_out);

  // rbim-mc
  std::optional<std::string> r_config, r_output, r_line;
  std::vector<std::size_t> r_sizes;
  std::vector<double> r_p, r_beta;
  std::optional<std::size_t> r_sweeps, r_therm, r_real, r_bins, r_workers;
  std::optional<std::uint64_t> r_seed;
  auto* mc = cli.add_subcommand("rbim-mc", "Monte Carlo of the 2D random-bond Ising model");
  mc->add_option("--config", r_config, "YAML or JSON config; flags override it")->check(CLI::ExistingFile);
  mc->add_option("--L", r_sizes, "lattice sizes")->delimiter(',');
  mc->add_option("--p", r_p, "antiferromagnetic bond probabilities")->delimiter(',');
  mc->add_option("--line", r_line)->check(CLI::IsMember({"nishimori", "fixed-beta"}));
  mc->add_option("--beta", r_beta, "inverse temperatures (fixed-beta line)")->delimiter(',');
  mc->add_option("--sweeps", r_sweeps);
  mc->add_option("--thermalization", r_therm);
  mc->add_option("--realizations", r_real);
  mc->add_option("--bins", r_bins);
  mc->add_option("--seed", r_seed);
  mc->add_option("--workers", r_workers)->check(CLI::Range(1, 1024));
  mc->add_option("--output", r_output);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = cli.exit(e);
    return code == 0 ? 0 : app::kUsage;
  }

  try {
    if (*geo) {
      emit_report(app::run_geometry(g_lx, g_ly, g_ascii), g_out);
      return app::kOk;
    }
    if (*code) {
      const auto r = app::run_code_check(c_lx, c_ly, c_model, c_gauge_out);
      emit_report(r, c_out);
      return r.status;
    }
    if (*map) {
      if (!m_j.empty()) m.j_values = m_j;
      m.dump_state = m_dump;
      const auto r = app::run_map_verify(m);
      emit_report(r, m_out);
      return r.status;
    }
    if (*orc) {
      if (!o_p.empty()) o.p_values = o_p;
      o.corrected = o_identity == "corrected";
      const auto r = app::run_rbim_oracle(o);
      emit_report(r, o_out);
      return r.status;
    }
    if (*scan) {
      auto spec = app::parse_scan(app::load_config_file(s_config));
      if (s_workers) spec.config.workers = *s_workers;
      if (s_output) spec.output = *s_output;
      return timed_table("scan", spec.output, spec.normalized, spec.config.workers, [&] { return app::run_scan(spec); });
    }
    if (*stab) {
      auto spec = app::parse_stability(app::load_config_file(t_config));
      if (t_workers) spec.config.workers = *t_workers;
      if (t_output) spec.output = *t_output;
      return timed_table("stability", spec.output, spec.normalized, spec.config.workers,
                         [&] { return app::run_stability(spec); });
    }
    if (*mc) {
      json cfg = r_config ? app::load_config_file(*r_config) : json::object();
      if (!cfg.is_object()) throw app::ConfigError("$", "expected a mapping");
      if (!r_sizes.empty()) cfg["sizes"] = r_sizes;
      if (!r_p.empty()) cfg["p_grid"] = r_p;
      if (!r_beta.empty()) cfg["beta_grid"] = r_beta;
      if (r_line) cfg["line"] = *r_line;
      if (r_sweeps) cfg["sweeps"] = *r_sweeps;
      if (r_therm) cfg["thermalization"] = *r_therm;
      if (r_real) cfg["realizations"] = *r_real;
      if (r_bins) cfg["bins"] = *r_bins;
      if (r_seed) cfg["seed"] = *r_seed;
      if (r_workers) cfg["workers"] = *r_workers;
      if (r_output) cfg["output"] = *r_output;
      const auto spec = app::parse_mc(cfg);
      return timed_table("rbim-mc", spec.output, spec.normalized, spec.options.workers,
                         [&] { return app::run_mc(spec); });
    }
  } catch (const app::ConfigError& e) {
    std::cerr << "ghsc: config error: " << e.what() << "\n";
    return app::kUsage;
  } catch (const std::exception& e) {
    std::cerr << "ghsc: " << e.what() << "\n";
    return app::kRuntime;
  }
  return app::kUsage;
}
