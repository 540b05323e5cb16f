#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ghsc/lattice.hpp"
#include "ghsc/pauli.hpp"

namespace ghsc {

using Amplitudes = Eigen::VectorXcd;

// Basis index b holds qubit q in bit q.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(std::size_t num_qubits);
  StateVector(std::size_t num_qubits, Amplitudes amplitudes);

  static StateVector basis_state(std::size_t num_qubits, std::uint64_t index);

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return static_cast<std::size_t>(amps_.size()); }
  const Amplitudes& amplitudes() const { return amps_; }
  Amplitudes& amplitudes() { return amps_; }
  std::complex<double> operator[](std::size_t b) const { return amps_[static_cast<Eigen::Index>(b)]; }

  double norm() const { return amps_.norm(); }
  StateVector& normalize();

 private:
  std::size_t num_qubits_ = 0;
  Amplitudes amps_;
};

// Matrix-free Pauli sum grouped by X pattern, with the diagonal part
// precomputed. Requires at most 30 qubits.
class SparsePauliMatrix {
 public:
  explicit SparsePauliMatrix(const PauliSum& sum);

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t dimension() const { return std::size_t{1} << num_qubits_; }
  void apply(const Amplitudes& in, Amplitudes& out) const;
  Amplitudes operator*(const Amplitudes& in) const;
  // Upper bound on the operator norm: sum of |coefficients|.
  double norm_bound() const { return norm_bound_; }

 private:
  struct Group {
    std::uint64_t x = 0;
    std::vector<std::pair<std::uint64_t, std::complex<double>>> z_terms;
  };
  std::size_t num_qubits_;
  Eigen::VectorXcd diagonal_;
  std::vector<Group> groups_;
  double norm_bound_ = 0.0;
};

enum class Model { kLghm, kGh, kTc };
const char* to_string(Model m);
// Accepts "LGHM", "GH", "TC" in any case; throws Error otherwise.
Model parse_model(std::string_view name);

struct HamiltonianSpec {
  Model model = Model::kTc;
  LatticeGeometry geometry{2, 1};
  double j = 0.0;
  PauliSum terms;
};

// Qubit spaces: TC links; GH vertices then links; LGHM vertices, plaquettes,
// links. Throws RangeError for j < 0.
HamiltonianSpec build_hamiltonian(Model model, const LatticeGeometry& geom, double j);
std::size_t model_qubits(Model model, const LatticeGeometry& geom);

struct Sector {
  int p = 1;
  int sz = 1;
  int lz = 1;
  bool operator==(const Sector&) const = default;
};

// P~, S~_Z, L_z on the model's qubit space (P^ = prod X_v and S^_Z = prod
// Z_p for the gauge-Higgs model; the GH model uses prod X_v and S~_Z).
struct SectorOperators {
  PauliOperator p;
  PauliOperator sz;
  PauliOperator lz;
};
SectorOperators sector_operators(Model model, const LatticeGeometry& geom);

struct EigenPair {
  double value = 0.0;
  Amplitudes vector;
  double residual = 0.0;
};

struct LanczosOptions {
  double residual_tol = 1e-10;
  double degeneracy_tol = 1e-9;
  std::size_t max_krylov = 400;
  std::size_t max_degeneracy = 64;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
};

// Lowest eigenpair of op restricted to the orthogonal complement of locked.
EigenPair lanczos_lowest(const SparsePauliMatrix& op, const std::vector<Amplitudes>& locked,
                         const LanczosOptions& options, std::uint64_t stream);

// Orthonormal basis of the (near-)degenerate ground space by repeated
// deflation.
std::vector<EigenPair> ground_space(const SparsePauliMatrix& op, const LanczosOptions& options = {});

struct GroundState {
  StateVector state;
  double energy = 0.0;
  std::size_t degeneracy = 0;
  // Number of ground-space vectors carrying the requested labels.
  std::size_t sector_multiplicity = 0;
  double residual = 0.0;
  Sector sector;
};

// Throws SectorNotFoundError when no ground-space vector has the requested
// labels, NumericalError when Lanczos does not converge, Error when a sector
// operator does not commute with the Hamiltonian.
GroundState ground_state_in_sector(const HamiltonianSpec& h, const Sector& sector, const LanczosOptions& options = {});

StateVector apply_pauli(const StateVector& state, const PauliOperator& op);
// Throws HermiticityError for non-Hermitian op, DimensionError on size mismatch.
double expectation(const StateVector& state, const PauliOperator& op);
std::complex<double> expectation(const StateVector& state, const PauliSum& op);
double energy_variance(const StateVector& state, const SparsePauliMatrix& h);

void apply_hadamard(StateVector& state, std::size_t q);
void apply_cz(StateVector& state, std::size_t a, std::size_t b);

enum class Direction { kForward, kInverse };

// Forward applies U_v U_p: U_p = H_plaq (prod CZ(p, l in p)) H_plaq, then
// U_v = H_links (prod CZ(v, l in star v)) H_links. Inverse applies U_p U_v.
StateVector apply_mapping_circuit(const StateVector& state, const LatticeGeometry& geom, Direction dir);
// U P U^dagger for U = U_v U_p (forward) or its inverse.
PauliOperator apply_mapping_circuit(const PauliOperator& op, const LatticeGeometry& geom, Direction dir);
PauliSum apply_mapping_circuit(const PauliSum& op, const LatticeGeometry& geom, Direction dir);
// U_p alone.
PauliSum apply_plaquette_circuit(const PauliSum& op, const LatticeGeometry& geom);

// Substitutes +1 for the fixed single-qubit operators (qubit, 'X' or 'Z') and
// drops those qubits; kept qubits are renumbered in the order given. Returns
// the offending term when one acts on a fixed qubit with anything other than
// I or the fixed letter.
struct SectorRestriction {
  std::optional<PauliSum> restricted;
  std::string offending_term;
};
SectorRestriction restrict_to_sector(const PauliSum& op, const std::vector<std::pair<std::size_t, char>>& fixed,
                                     const std::vector<std::size_t>& kept);
SectorRestriction restrict_to_sector(const PauliOperator& op, const std::vector<std::pair<std::size_t, char>>& fixed,
                                     const std::vector<std::size_t>& kept);

struct MappingCheck {
  std::string name;
  bool passed = true;
  double residual = 0.0;
  std::string detail;
};

struct MappingReport {
  std::vector<MappingCheck> checks;
  bool passed() const;
};

struct MappingOptions {
  std::vector<double> j_values{0.0, 0.3, 0.7, 1.2};
  double tolerance = 1e-10;
  // The state-level spectral check runs when the LGHM has at most this many qubits.
  std::size_t max_spectral_qubits = 16;
};

MappingReport verify_mapping(const LatticeGeometry& geom, const MappingOptions& options = {});

// Eigenvalues (ascending) of the gauge-fixed block of U H_LGHM U^dagger,
// assembled column by column on the states |+>^V |0>^P |b>_links with the
// state-level circuit.
Eigen::VectorXd gauge_fixed_spectrum(const LatticeGeometry& geom, double j);

// Dense matrix of a Pauli sum, for small spaces.
Eigen::MatrixXcd dense_matrix(const PauliSum& op);

// Binary layout: 8-byte magic "GHSCST01", uint32 qubit count, uint32 zero,
// then 2^n (real, imag) float64 pairs, all little-endian.
void write_state_binary(const std::string& path, const StateVector& state);
StateVector read_state_binary(const std::string& path);

}  // namespace ghsc
