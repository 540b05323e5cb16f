#include "ghsc/code.hpp"

#include <algorithm>

#include "ghsc/errors.hpp"

namespace ghsc {

namespace {

PauliOperator on_links(const LatticeGeometry& g, const std::vector<std::size_t>& links, char letter) {
  return letter == 'X' ? PauliOperator::x_string(g.num_links(), links) : PauliOperator::z_string(g.num_links(), links);
}

std::string label(const char* prefix, std::size_t i) { return prefix + std::to_string(i); }

PauliSpan center_of(const PauliSpan& span) { return centralizer_in_span(span, span.generators()); }

}  // namespace

PauliOperator vertex_star_x(const LatticeGeometry& g, std::size_t v) { return on_links(g, g.star(v), 'X'); }
PauliOperator plaquette_z(const LatticeGeometry& g, std::size_t p) { return on_links(g, g.boundary(p), 'Z'); }
PauliOperator link_x(const LatticeGeometry& g, std::size_t l) { return PauliOperator::single(g.num_links(), l, 'X'); }
PauliOperator link_z(const LatticeGeometry& g, std::size_t l) { return PauliOperator::single(g.num_links(), l, 'Z'); }
PauliOperator logical_x_op(const LatticeGeometry& g) { return on_links(g, logical_supports(g).lx_support, 'X'); }
PauliOperator logical_z_op(const LatticeGeometry& g) { return on_links(g, logical_supports(g).lz_support, 'Z'); }
PauliOperator rough_parity_op(const LatticeGeometry& g) { return on_links(g, symmetry_supports(g).rough_all, 'X'); }
PauliOperator smooth_parity_op(const LatticeGeometry& g) { return on_links(g, symmetry_supports(g).smooth_all, 'Z'); }

PauliOperator embed_links(const LatticeGeometry& g, const PauliOperator& link_op) {
  if (link_op.num_qubits() != g.num_links()) throw DimensionError("link operator has wrong size");
  const LghmLayout layout(g);
  BitVector x(layout.num_qubits()), z(layout.num_qubits());
  for (std::size_t l = 0; l < g.num_links(); ++l) {
    x[layout.link(l)] = link_op.x(l);
    z[layout.link(l)] = link_op.z(l);
  }
  return PauliOperator(std::move(x), std::move(z), link_op.phase());
}

std::size_t subsystem_logical_count(const PauliSpan& gauge, const PauliSpan& center, std::size_t n) {
  const std::size_t s = center.rank();
  const std::size_t g = gauge.rank();
  if (g < s || (g - s) % 2 != 0) throw Error("gauge rank minus center rank is not a nonnegative even number");
  return n - s - (g - s) / 2;
}

CodeStructure build_lghm_code(const LatticeGeometry& g) {
  const LghmLayout q(g);
  const std::size_t n = q.num_qubits();
  CodeStructure code;
  code.model = CodeModel::kLghm;
  code.n_qubits = n;

  std::vector<PauliOperator> gauge;
  for (const auto& l : g.links()) {
    if (l.plaquettes.size() == 2) {
      BitVector x(n), z(n);
      x.set(q.plaquette(l.plaquettes[0]));
      x.set(q.plaquette(l.plaquettes[1]));
      x.set(q.link(l.id));
      gauge.emplace_back(std::move(x), std::move(z));
      code.gauge_labels.push_back(label("XsX_l", l.id));
    }
  }
  for (const auto& l : g.links()) {
    if (l.vertices.size() == 2) {
      BitVector x(n), z(n);
      z.set(q.vertex(l.vertices[0]));
      z.set(q.vertex(l.vertices[1]));
      z.set(q.link(l.id));
      gauge.emplace_back(std::move(x), std::move(z));
      code.gauge_labels.push_back(label("ZsZ_l", l.id));
    }
  }
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    gauge.push_back(PauliOperator::single(n, q.vertex(v), 'X'));
    code.gauge_labels.push_back(label("X_v", v));
  }
  for (std::size_t p = 0; p < g.num_plaquettes(); ++p) {
    gauge.push_back(PauliOperator::single(n, q.plaquette(p), 'Z'));
    code.gauge_labels.push_back(label("Z_p", p));
  }

  std::vector<PauliOperator> stabilizers;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    stabilizers.push_back(multiply(PauliOperator::single(n, q.vertex(v), 'X'), embed_links(g, vertex_star_x(g, v))));
    code.stabilizer_labels.push_back(label("G_v", v));
  }
  for (std::size_t p = 0; p < g.num_plaquettes(); ++p) {
    stabilizers.push_back(multiply(PauliOperator::single(n, q.plaquette(p), 'Z'), embed_links(g, plaquette_z(g, p))));
    code.stabilizer_labels.push_back(label("B_p", p));
  }

  // Gauss-law operators join the Hamiltonian terms.
  gauge.insert(gauge.end(), stabilizers.begin(), stabilizers.end());
  code.gauge_labels.insert(code.gauge_labels.end(), code.stabilizer_labels.begin(), code.stabilizer_labels.end());
  code.gauge_generators = PauliSpan(std::move(gauge));
  code.stabilizer_generators = PauliSpan(std::move(stabilizers));

  std::vector<std::size_t> vq, pq;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) vq.push_back(q.vertex(v));
  for (std::size_t p = 0; p < g.num_plaquettes(); ++p) pq.push_back(q.plaquette(p));
  code.sector_symmetries = PauliSpan({PauliOperator::x_string(n, vq), PauliOperator::z_string(n, pq)});

  code.logical_x = embed_links(g, logical_x_op(g));
  code.logical_z = embed_links(g, logical_z_op(g));
  code.k = subsystem_logical_count(code.gauge_generators, center_of(code.gauge_generators), n);
  return code;
}

CodeStructure build_tc_code(const LatticeGeometry& g) {
  CodeStructure code;
  code.model = CodeModel::kToric;
  code.n_qubits = g.num_links();
  std::vector<PauliOperator> stabilizers;
  for (std::size_t v = 0; v < g.num_vertices(); ++v) {
    stabilizers.push_back(vertex_star_x(g, v));
    code.stabilizer_labels.push_back(label("G~_v", v));
  }
  for (std::size_t p = 0; p < g.num_plaquettes(); ++p) {
    stabilizers.push_back(plaquette_z(g, p));
    code.stabilizer_labels.push_back(label("B~_p", p));
  }
  code.stabilizer_generators = PauliSpan(stabilizers);
  code.gauge_generators = PauliSpan(std::move(stabilizers));
  code.gauge_labels = code.stabilizer_labels;
  code.logical_x = logical_x_op(g);
  code.logical_z = logical_z_op(g);
  code.k = code.n_qubits - code.stabilizer_generators.rank();
  return code;
}

GaugeOutResult gauge_out(const CodeStructure& code, const std::vector<PauliOperator>& noise_ops) {
  for (std::size_t i = 0; i < noise_ops.size(); ++i) {
    const auto& e = noise_ops[i];
    if (e.num_qubits() != code.n_qubits) throw DimensionError("noise operator size does not match code");
    if (!e.is_hermitian()) throw HermiticityError("noise operator " + e.str() + " is not Hermitian");
    if (!commutes(e, code.logical_x) || !commutes(e, code.logical_z)) {
      throw LogicalDestroyedError("noise operator " + std::to_string(i) + " (" + e.str() +
                                  ") anticommutes with a logical operator");
    }
  }

  GaugeOutResult out;
  const auto& old = code.stabilizer_generators.generators();
  for (std::size_t i = 0; i < old.size(); ++i) {
    const bool ok = std::all_of(noise_ops.begin(), noise_ops.end(), [&](const auto& e) { return commutes(e, old[i]); });
    (ok ? out.survivors : out.gauged_out).push_back(code.stabilizer_labels[i]);
  }

  std::vector<PauliOperator> enlarged = old;
  for (const auto& s : code.sector_symmetries.generators()) enlarged.push_back(s);
  enlarged.insert(enlarged.end(), noise_ops.begin(), noise_ops.end());
  out.surviving_span = centralizer_in_span(PauliSpan(enlarged), noise_ops);

  std::vector<PauliOperator> mixed_gens = code.gauge_generators.generators();
  std::vector<std::string> labels = code.gauge_labels;
  labels.resize(mixed_gens.size(), "gauge");
  for (const auto& s : code.sector_symmetries.generators()) {
    mixed_gens.push_back(s);
    labels.push_back("sector");
  }
  for (std::size_t i = 0; i < noise_ops.size(); ++i) {
    mixed_gens.push_back(noise_ops[i]);
    labels.push_back(label("noise", i));
  }
  const PauliSpan mixed(mixed_gens);

  CodeStructure& c = out.code;
  c.model = code.model;
  c.n_qubits = code.n_qubits;
  c.gauge_generators = mixed;
  c.gauge_labels = labels;
  c.stabilizer_generators = center_of(mixed);
  for (const auto& s : c.stabilizer_generators.generators()) {
    std::string name = "product";
    for (std::size_t i = 0; i < mixed_gens.size(); ++i) {
      if (mixed_gens[i].equal_up_to_phase(s)) {
        name = labels[i];
        break;
      }
    }
    c.stabilizer_labels.push_back(name);
  }
  c.logical_x = code.logical_x;
  c.logical_z = code.logical_z;
  c.k = subsystem_logical_count(c.gauge_generators, c.stabilizer_generators, c.n_qubits);
  return out;
}

bool CodeReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

CodeReport verify_code(const CodeStructure& code) {
  CodeReport report;
  report.n_qubits = code.n_qubits;
  report.stabilizer_rank = code.stabilizer_generators.rank();
  report.gauge_rank = code.gauge_generators.rank();
  report.k = code.k;

  const auto& stabs = code.stabilizer_generators.generators();
  const auto& gauge = code.gauge_generators.generators();
  auto stab_name = [&](std::size_t i) { return i < code.stabilizer_labels.size() ? code.stabilizer_labels[i] : label("s", i); };
  auto gauge_name = [&](std::size_t i) { return i < code.gauge_labels.size() ? code.gauge_labels[i] : label("g", i); };

  auto add = [&report](std::string name) -> CheckResult& {
    report.checks.push_back({std::move(name), true, {}});
    return report.checks.back();
  };
  auto fail = [](CheckResult& c, std::string detail) {
    if (c.passed) c.detail = std::move(detail);
    c.passed = false;
  };

  {
    auto& c = add("stabilizers_hermitian");
    for (std::size_t i = 0; i < stabs.size(); ++i)
      if (!stabs[i].is_hermitian()) fail(c, stab_name(i) + " is not Hermitian");
  }
  {
    auto& c = add("stabilizers_commute_with_gauge");
    for (std::size_t i = 0; i < stabs.size() && c.passed; ++i)
      for (std::size_t j = 0; j < gauge.size(); ++j)
        if (!commutes(stabs[i], gauge[j])) {
          fail(c, stab_name(i) + " anticommutes with " + gauge_name(j));
          break;
        }
  }
  {
    auto& c = add("stabilizers_span_center");
    const auto center = center_of(code.gauge_generators);
    const auto expected = code.stabilizer_generators.joined(code.sector_symmetries);
    if (!center.same_row_space(expected)) {
      fail(c, "center rank " + std::to_string(center.rank()) + " vs stabilizers+sector rank " +
                  std::to_string(expected.rank()));
    }
  }
  for (const auto* which : {"logical_x", "logical_z"}) {
    const auto& l = std::string(which) == "logical_x" ? code.logical_x : code.logical_z;
    auto& c = add(std::string(which) + "_commutes_with_gauge");
    for (std::size_t j = 0; j < gauge.size(); ++j)
      if (!commutes(l, gauge[j])) {
        fail(c, std::string(which) + " anticommutes with " + gauge_name(j));
        break;
      }
    auto& nt = add(std::string(which) + "_nontrivial");
    if (code.gauge_generators.contains(l)) fail(nt, std::string(which) + " lies in the gauge group");
  }
  {
    auto& c = add("logicals_anticommute");
    if (commutes(code.logical_x, code.logical_z)) fail(c, "logical_x and logical_z commute");
  }
  {
    auto& c = add("logical_count");
    const auto expected = subsystem_logical_count(code.gauge_generators, center_of(code.gauge_generators), code.n_qubits);
    if (expected != code.k || code.k == 0) {
      fail(c, "k = " + std::to_string(code.k) + " but rank accounting gives " + std::to_string(expected));
    }
  }
  return report;
}

}  // namespace ghsc
