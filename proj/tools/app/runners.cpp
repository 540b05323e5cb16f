#include "runners.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ghsc/code.hpp"
#include "ghsc/exact.hpp"
#include "ghsc/seed.hpp"
#include "io.hpp"

namespace ghsc::app {

using nlohmann::json;

namespace {

json ids(const std::vector<std::size_t>& v) { return json(v); }

json span_json(const PauliSpan& s) {
  json a = json::array();
  for (const auto& g : s.generators()) a.push_back(g.str());
  return a;
}

json code_json(const CodeStructure& code, const CodeReport& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    json e{{"name", c.name}, {"passed", c.passed}};
    if (!c.detail.empty()) e["detail"] = c.detail;
    checks.push_back(std::move(e));
  }
  return {{"model", code.model == CodeModel::kLghm ? "LGHM" : "TC"},
          {"n_qubits", report.n_qubits},
          {"stabilizer_rank", report.stabilizer_rank},
          {"gauge_rank", report.gauge_rank},
          {"k", report.k},
          {"stabilizers", code.stabilizer_labels},
          {"logical_x", code.logical_x.str()},
          {"logical_z", code.logical_z.str()},
          {"passed", report.passed()},
          {"checks", checks}};
}

std::string status_text(bool ok) { return ok ? "ok" : "error"; }

}  // namespace

json stamp(json report, const std::string& schema, const json& normalized) {
  report["schema"] = schema;
  report["tool_version"] = kToolVersion;
  report["config_hash"] = config_hash(normalized);
  return report;
}

json geometry_json(const LatticeGeometry& g) {
  json vertices = json::array();
  for (std::size_t r = 0; r < g.ly(); ++r)
    for (std::size_t c = 0; c < g.lx(); ++c) {
      const auto v = g.vertex_id(r, c);
      vertices.push_back({{"id", v}, {"row", r}, {"col", c}, {"star", ids(g.star(v))}});
    }
  json plaquettes = json::array();
  for (std::size_t pr = 0; pr <= g.ly(); ++pr)
    for (std::size_t pc = 0; pc + 1 < g.lx(); ++pc) {
      const auto p = g.plaquette_id(pr, pc);
      plaquettes.push_back({{"id", p}, {"row", pr}, {"col", pc}, {"boundary", ids(g.boundary(p))}});
    }
  json links = json::array();
  for (const auto& l : g.links())
    links.push_back({{"id", l.id},
                     {"kind", to_string(l.kind)},
                     {"class", to_string(l.link_class())},
                     {"row", l.row},
                     {"col", l.col},
                     {"vertices", ids(l.vertices)},
                     {"plaquettes", ids(l.plaquettes)}});
  const auto ls = logical_supports(g);
  const auto ss = symmetry_supports(g);
  return {{"lx", g.lx()},
          {"ly", g.ly()},
          {"num_vertices", g.num_vertices()},
          {"num_plaquettes", g.num_plaquettes()},
          {"num_links", g.num_links()},
          {"vertices", vertices},
          {"plaquettes", plaquettes},
          {"links", links},
          {"smooth_links", ids(g.smooth_links())},
          {"rough_links", ids(g.rough_links())},
          {"decohered_links", ids(g.non_smooth_links())},
          {"logical_x_support", ids(ls.lx_support)},
          {"logical_z_support", ids(ls.lz_support)},
          {"rough_parity_support", ids(ss.rough_all)},
          {"smooth_parity_support", ids(ss.smooth_all)}};
}

Outcome run_geometry(std::size_t lx, std::size_t ly, bool ascii) {
  const auto g = build_geometry(lx, ly);
  json report = geometry_json(g);
  if (ascii) report["ascii"] = render_ascii(g);
  Outcome out;
  out.schema = kReportSchema;
  out.report = stamp(std::move(report), kReportSchema, {{"subcommand", "geometry"}, {"lx", lx}, {"ly", ly}});
  return out;
}

Outcome run_code_check(std::size_t lx, std::size_t ly, const std::string& model, bool gauge_out_noise) {
  const auto g = build_geometry(lx, ly);
  json codes = json::array();
  bool ok = true;
  if (model == "lghm" || model == "both") {
    const auto code = build_lghm_code(g);
    const auto r = verify_code(code);
    ok = ok && r.passed();
    codes.push_back(code_json(code, r));
  }
  json gauge_out_report;
  if (model == "tc" || model == "both") {
    const auto code = build_tc_code(g);
    const auto r = verify_code(code);
    ok = ok && r.passed();
    codes.push_back(code_json(code, r));
    if (gauge_out_noise) {
      std::vector<PauliOperator> noise;
      for (auto l : g.non_smooth_links()) noise.push_back(link_x(g, l));
      const auto res = gauge_out(code, noise);
      const auto rr = verify_code(res.code);
      ok = ok && rr.passed();
      gauge_out_report = {{"noise_links", ids(g.non_smooth_links())},
                          {"survivors", res.survivors},
                          {"gauged_out", res.gauged_out},
                          {"surviving_span_rank", res.surviving_span.rank()},
                          {"surviving_span", span_json(res.surviving_span)},
                          {"code", code_json(res.code, rr)}};
    }
  }
  json report{{"lx", lx}, {"ly", ly}, {"codes", codes}, {"passed", ok}};
  if (!gauge_out_report.is_null()) report["gauge_out"] = gauge_out_report;
  Outcome out;
  out.status = ok ? kOk : kFailed;
  out.schema = kReportSchema;
  out.report = stamp(std::move(report), kReportSchema,
                     {{"subcommand", "code-check"}, {"lx", lx}, {"ly", ly}, {"model", model}, {"gauge_out", gauge_out_noise}});
  return out;
}

Outcome run_map_verify(const MapVerifyOptions& o) {
  const auto g = build_geometry(o.lx, o.ly);
  MappingOptions mo;
  mo.j_values = o.j_values;
  mo.tolerance = o.tolerance;
  const auto r = verify_mapping(g, mo);
  json checks = json::array();
  double worst = 0.0;
  for (const auto& c : r.checks) {
    json e{{"name", c.name}, {"passed", c.passed}, {"residual", c.residual}};
    if (!c.detail.empty()) e["detail"] = c.detail;
    worst = std::max(worst, c.residual);
    checks.push_back(std::move(e));
  }
  if (o.dump_state) {
    const auto h = build_hamiltonian(Model::kTc, g, o.j_values.front());
    write_state_binary(*o.dump_state, ground_state_in_sector(h, Sector{}).state);
  }
  Outcome out;
  out.status = r.passed() ? kOk : kFailed;
  out.schema = kReportSchema;
  out.report = stamp({{"lx", o.lx},
                      {"ly", o.ly},
                      {"lghm_qubits", model_qubits(Model::kLghm, g)},
                      {"j_values", o.j_values},
                      {"tolerance", o.tolerance},
                      {"worst_residual", worst},
                      {"passed", r.passed()},
                      {"checks", checks}},
                     kReportSchema,
                     {{"subcommand", "map-verify"}, {"lx", o.lx}, {"ly", o.ly}, {"j_values", o.j_values},
                      {"tolerance", o.tolerance}});
  return out;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> oracle_pairs(const LatticeGeometry& g, std::size_t samples,
                                                                  std::uint64_t seed) {
  const std::size_t n = g.num_links();
  const std::uint64_t mask = n >= 64 ? ~0ULL : ((1ULL << n) - 1);
  std::vector<std::uint64_t> stars;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) stars.push_back(vertex_star_x(g, v).x_mask());
  std::mt19937_64 rng(seed_derive(seed, 0));
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  for (std::size_t i = 0; i < samples; ++i) {
    const std::uint64_t s = rng() & mask;
    std::uint64_t t;
    if (i % 2 == 0) {
      t = s;
      const std::uint64_t pick = rng();
      for (std::size_t v = 0; v < stars.size(); ++v)
        if ((pick >> (v % 64)) & 1U) t ^= stars[v];
    } else {
      t = rng() & mask;
    }
    out.emplace_back(s, t);
  }
  return out;
}

std::vector<OracleSummary> oracle_check(const OracleOptions& o) {
  const auto g = build_geometry(o.lx, o.ly);
  const auto pairs = oracle_pairs(g, o.samples, o.seed);
  MatrixElementOracle oracle(g);
  std::vector<OracleSummary> out;
  for (double p : o.p_values) {
    OracleSummary s;
    s.p_x = p;
    for (const auto& [a, b] : pairs) {
      const auto r = oracle.evaluate(a, b, p);
      ++s.pairs;
      s.in_class += r.delta;
      s.printed_pass += r.match;
      s.corrected_pass += r.match_corrected;
      if (r.residual > s.worst_printed || s.pairs == 1) {
        s.worst_printed = r.residual;
        s.worst_s = a;
        s.worst_s_prime = b;
      }
      s.worst_corrected = std::max(s.worst_corrected, r.residual_corrected);
    }
    out.push_back(s);
  }
  return out;
}

Outcome run_rbim_oracle(const OracleOptions& o) {
  const auto summaries = oracle_check(o);
  json rows = json::array();
  bool printed_ok = true, corrected_ok = true;
  double worst_p = 0.0, worst_c = 0.0;
  for (const auto& s : summaries) {
    printed_ok = printed_ok && s.printed_pass == s.pairs;
    corrected_ok = corrected_ok && s.corrected_pass == s.pairs;
    worst_p = std::max(worst_p, s.worst_printed);
    worst_c = std::max(worst_c, s.worst_corrected);
    rows.push_back({{"p_x", s.p_x},
                    {"pairs", s.pairs},
                    {"in_class", s.in_class},
                    {"printed_pass", s.printed_pass},
                    {"corrected_pass", s.corrected_pass},
                    {"worst_residual_printed", s.worst_printed},
                    {"worst_residual_corrected", s.worst_corrected},
                    {"worst_pair_printed", {s.worst_s, s.worst_s_prime}}});
  }
  const bool ok = o.corrected ? corrected_ok : printed_ok;
  Outcome out;
  out.status = ok ? kOk : kFailed;
  out.schema = kReportSchema;
  out.report = stamp({{"lx", o.lx},
                      {"ly", o.ly},
                      {"identity", o.corrected ? "corrected" : "printed"},
                      {"tolerance", 1e-9},
                      {"passed", ok},
                      {"printed_passed", printed_ok},
                      {"corrected_passed", corrected_ok},
                      {"worst_residual_printed", worst_p},
                      {"worst_residual_corrected", worst_c},
                      {"points", rows}},
                     kReportSchema,
                     {{"subcommand", "rbim-oracle"}, {"lx", o.lx}, {"ly", o.ly}, {"p_values", o.p_values},
                      {"samples", o.samples}, {"seed", o.seed}, {"identity", o.corrected ? "corrected" : "printed"}});
  return out;
}

Outcome run_scan(const ScanSpec& spec) {
  const auto& cfg = spec.config;
  const std::string hash = config_hash(spec.normalized);
  std::vector<std::string> cols{"model", "lx",     "ly",             "j",             "p_x",        "status",
                                "error", "entropy", "log_base",      "top_k",         "purity",     "lz_expectation",
                                "ground_energy", "degeneracy", "rank"};
  for (const auto& o : cfg.observables) {
    cols.push_back(o.name + "_mean");
    cols.push_back(o.name + "_var");
  }
  CsvTable table(kScanSchema, hash, cols);
  Outcome out;
  for (const auto& r : scan(cfg)) {
    CsvTable::Row row;
    row.add(spec.model).add(cfg.geometry.lx()).add(cfg.geometry.ly()).add(r.j).add(r.p_x).add(status_text(r.ok));
    row.add(r.ok ? "" : r.error);
    if (r.ok) {
      row.add(r.entropy).add(to_string(cfg.log_base));
      cfg.top_k ? row.add(*cfg.top_k) : row.add("all");
      row.add(r.purity).add(r.lz_expectation).add(r.ground_energy).add(r.degeneracy).add(r.rank);
      for (const auto& m : r.moments) row.add(m.mean).add(m.variance);
    } else {
      row.add_na().add(to_string(cfg.log_base));
      cfg.top_k ? row.add(*cfg.top_k) : row.add("all");
      for (int i = 0; i < 5; ++i) row.add_na();
      for (std::size_t i = 0; i < cfg.observables.size(); ++i) row.add_na().add_na();
    }
    table.push(std::move(row));
    ++out.rows;
    out.failed_rows += !r.ok;
  }
  out.schema = kScanSchema;
  out.csv = table.str();
  out.status = out.failed_rows ? kFailed : kOk;
  out.report = {{"rows", out.rows}, {"failed_rows", out.failed_rows}, {"config_hash", hash}};
  return out;
}

Outcome run_stability(const StabilitySpec& spec) {
  const auto& cfg = spec.config;
  const std::string hash = config_hash(spec.normalized);
  CsvTable table(kStabilitySchema, hash,
                 {"model", "lx", "ly", "j", "p_x", "dt", "status", "error", "mean", "variance", "exact_f_re", "exact_f_im",
                  "abs_exact_f", "cumulant_f_re", "cumulant_f_im", "abs_cumulant_f", "abs_difference"});
  Outcome out;
  for (const auto& r : stability_scan(cfg)) {
    CsvTable::Row row;
    row.add(spec.model).add(cfg.geometry.lx()).add(cfg.geometry.ly()).add(r.j).add(r.p_x).add(r.dt);
    row.add(status_text(r.ok)).add(r.ok ? "" : r.error);
    if (r.ok) {
      row.add(r.mean).add(r.variance);
      row.add(r.exact_f.real()).add(r.exact_f.imag()).add(std::abs(r.exact_f));
      row.add(r.cumulant_f.real()).add(r.cumulant_f.imag()).add(std::abs(r.cumulant_f));
      row.add(std::abs(r.exact_f - r.cumulant_f));
    } else {
      for (int i = 0; i < 9; ++i) row.add_na();
    }
    table.push(std::move(row));
    ++out.rows;
    out.failed_rows += !r.ok;
  }
  out.schema = kStabilitySchema;
  out.csv = table.str();
  out.status = out.failed_rows ? kFailed : kOk;
  out.report = {{"rows", out.rows}, {"failed_rows", out.failed_rows}, {"config_hash", hash}};
  return out;
}

Outcome run_mc(const McSpec& spec) {
  const std::string hash = config_hash(spec.normalized);
  CsvTable table(kMcSchema, hash,
                 {"line", "l", "p", "beta", "realizations", "thermalization", "sweeps", "energy", "energy_err", "abs_m",
                  "abs_m_err", "m2", "m4", "binder", "binder_err", "thermalized", "first_seed"});
  const std::string line = spec.line == McLine::kNishimori ? "nishimori" : "fixed-beta";
  Outcome out;
  for (const auto& e : mc_scan(spec.points(), spec.options)) {
    CsvTable::Row row;
    row.add(line).add(e.point.l).add(e.point.p).add(e.point.beta).add(e.realizations);
    row.add(spec.options.thermalization).add(spec.options.sweeps);
    row.add(e.energy).add(e.energy_err).add(e.abs_m).add(e.abs_m_err).add(e.m2).add(e.m4);
    row.add(e.binder).add(e.binder_err).add(e.thermalized ? "true" : "false").add(std::to_string(e.first_seed));
    table.push(std::move(row));
    ++out.rows;
    out.failed_rows += !e.thermalized;
  }
  out.schema = kMcSchema;
  out.csv = table.str();
  // Unthermalized points are flagged in the CSV but not fatal.
  out.report = {{"rows", out.rows}, {"unthermalized_points", out.failed_rows}, {"config_hash", hash}};
  out.failed_rows = 0;
  return out;
}

}  // namespace ghsc::app
