#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ghsc/lattice.hpp"
#include "ghsc/pauli.hpp"

namespace ghsc {

// Qubit layout of the gauge-Higgs model: vertices, then plaquettes, then links.
struct LghmLayout {
  std::size_t num_vertices = 0;
  std::size_t num_plaquettes = 0;
  std::size_t num_links = 0;

  explicit LghmLayout(const LatticeGeometry& g)
      : num_vertices(g.num_vertices()), num_plaquettes(g.num_plaquettes()), num_links(g.num_links()) {}
  std::size_t num_qubits() const { return num_vertices + num_plaquettes + num_links; }
  std::size_t vertex(std::size_t v) const { return v; }
  std::size_t plaquette(std::size_t p) const { return num_vertices + p; }
  std::size_t link(std::size_t l) const { return num_vertices + num_plaquettes + l; }
};

enum class CodeModel { kLghm, kToric };

struct CodeStructure {
  CodeModel model = CodeModel::kToric;
  std::size_t n_qubits = 0;
  PauliSpan gauge_generators;
  PauliSpan stabilizer_generators;
  std::vector<std::string> stabilizer_labels;
  std::vector<std::string> gauge_labels;
  // Central elements fixed by the chosen sector but not counted as stabilizers
  // (P^ and S^_Z of the gauge-Higgs model).
  PauliSpan sector_symmetries;
  PauliOperator logical_x;
  PauliOperator logical_z;
  std::size_t k = 0;
};

// Operators on the link space (toric code qubits).
PauliOperator vertex_star_x(const LatticeGeometry& g, std::size_t v);    // G~_v
PauliOperator plaquette_z(const LatticeGeometry& g, std::size_t p);      // B~_p
PauliOperator link_x(const LatticeGeometry& g, std::size_t l);
PauliOperator link_z(const LatticeGeometry& g, std::size_t l);
PauliOperator logical_x_op(const LatticeGeometry& g);
PauliOperator logical_z_op(const LatticeGeometry& g);
PauliOperator rough_parity_op(const LatticeGeometry& g);    // P~
PauliOperator smooth_parity_op(const LatticeGeometry& g);   // S~_Z

// Embeds a link-space operator into the gauge-Higgs qubit layout.
PauliOperator embed_links(const LatticeGeometry& g, const PauliOperator& link_op);

CodeStructure build_lghm_code(const LatticeGeometry& g);
CodeStructure build_tc_code(const LatticeGeometry& g);

// Subsystem accounting: with s = rank of the stabilizers (sector symmetries
// included) and 2r = rank(gauge) - s gauge-qubit pairs, k = n - s - r.
std::size_t subsystem_logical_count(const PauliSpan& gauge, const PauliSpan& center, std::size_t n);

struct GaugeOutResult {
  // Gauge group <old gauge group, noise>; stabilizers are its center.
  CodeStructure code;
  // Centralizer of the noise inside <old stabilizers, noise>, i.e. the
  // surviving stabilizers together with the noise strings.
  PauliSpan surviving_span;
  // Old stabilizer generators commuting with every noise operator.
  std::vector<std::string> survivors;
  // Old stabilizer generators anticommuting with some noise operator.
  std::vector<std::string> gauged_out;
};

// Throws LogicalDestroyedError when a noise operator anticommutes with a
// logical, HermiticityError for non-Hermitian noise.
GaugeOutResult gauge_out(const CodeStructure& code, const std::vector<PauliOperator>& noise_ops);

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;  // first counterexample when failing
};

struct CodeReport {
  std::vector<CheckResult> checks;
  std::size_t n_qubits = 0;
  std::size_t stabilizer_rank = 0;
  std::size_t gauge_rank = 0;
  std::size_t k = 0;
  bool passed() const;
};

CodeReport verify_code(const CodeStructure& code);

}  // namespace ghsc
