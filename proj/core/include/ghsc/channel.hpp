#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ghsc/exact.hpp"
#include "ghsc/lattice.hpp"
#include "ghsc/pauli.hpp"

namespace ghsc {

struct ChannelOptions {
  // Largest number of decohered links accepted (2^n_d Kraus branches).
  std::size_t kraus_cap = 20;
  // The Gram matrix is dense; beyond this many links it would not fit in memory.
  std::size_t max_gram_links = 14;
};

// E[rho] = sum_S w_S X_S |psi><psi| X_S over subsets S of the decohered links
// (every link that is not smooth), w_S = p^|S| (1-p)^(n_d-|S|).
class DecoheredState {
 public:
  const LatticeGeometry& geometry() const { return geom_; }
  double p_x() const { return p_x_; }
  const StateVector& base_state() const { return psi_; }
  const std::vector<std::size_t>& decohered_links() const { return links_; }
  std::size_t num_branches() const { return masks_.size(); }
  // Qubit flip mask of branch S (bit i of S selects decohered_links()[i]).
  const std::vector<std::uint64_t>& branch_masks() const { return masks_; }
  const std::vector<double>& branch_weights() const { return weights_; }
  // G_{S,S'} = sqrt(w_S w_S') <psi|X_S X_S'|psi>; real because X strings are Hermitian.
  const Eigen::MatrixXd& gram() const { return gram_; }
  // Nonzero spectrum of rho, nonincreasing.
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  // Eigenvalues above tol.
  std::size_t rank(double tol = 1e-12) const;

 private:
  friend DecoheredState decohere(const StateVector&, const LatticeGeometry&, double, const ChannelOptions&);
  DecoheredState(const LatticeGeometry& g) : geom_(g) {}

  LatticeGeometry geom_;
  double p_x_ = 0.0;
  StateVector psi_;
  std::vector<std::size_t> links_;
  std::vector<std::uint64_t> masks_;
  std::vector<double> weights_;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd eigenvalues_;
};

// psi lives on the toric-code link qubits. Throws RangeError for p_x outside
// [0, 1/2], DimensionError for a wrong state size, SizeError above the caps.
DecoheredState decohere(const StateVector& psi, const LatticeGeometry& geom, double p_x,
                        const ChannelOptions& options = {});

enum class LogBase { kNatural, kTwo };
const char* to_string(LogBase b);

// -sum lambda log lambda over the top_k largest eigenvalues (all when absent).
double entropy(const DecoheredState& d, std::optional<std::size_t> top_k = std::nullopt,
               LogBase base = LogBase::kNatural);
double purity(const DecoheredState& d);

// Tr[rho P] in closed form: <psi|P|psi> times (1-2p) per decohered link where P
// has a Z or Y letter.
std::complex<double> channel_expectation(const DecoheredState& d, const PauliOperator& op);
// Same quantity summed branch by branch over all Kraus terms.
std::complex<double> channel_expectation_branchwise(const DecoheredState& d, const PauliOperator& op);
std::complex<double> channel_expectation(const DecoheredState& d, const PauliSum& op);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};
// Throws HermiticityError for a non-Hermitian combination.
Moments observable_moments(const DecoheredState& d, const PauliSum& op);

// Explicit 2^N x 2^N density matrix (N <= 12).
Eigen::MatrixXcd density_matrix(const DecoheredState& d);

// <Omega_s| E[rho] |Omega_s'> with |Omega_s> = prod_l (sigma^x_l)^{s_l} |0...0>;
// bit l of s is set where s_l = -1.
std::complex<double> omega_matrix_element(const DecoheredState& d, std::uint64_t s, std::uint64_t s_prime);

// Adjacent bulk plaquettes closest to the lattice centre (lowest ids on ties).
// Throws GeometryError when no such pair exists.
std::pair<std::size_t, std::size_t> default_gauge_plaquettes(const LatticeGeometry& geom);
// (B~_p1 + B~_p2) / 2.
PauliSum gauge_observable(const LatticeGeometry& geom, std::size_t p1, std::size_t p2);

struct GroundResult {
  std::optional<GroundState> state;
  std::string error;
};
// Toric-code ground states for each J in the given sector; failures are
// recorded, not thrown.
std::vector<GroundResult> tc_ground_states(const LatticeGeometry& geom, const std::vector<double>& j_grid,
                                           const Sector& sector, const LanczosOptions& lanczos, std::size_t workers);

struct Observable {
  std::string name;
  PauliSum op;
};

struct ScanConfig {
  LatticeGeometry geometry{3, 2};
  std::vector<double> j_grid;
  std::vector<double> p_grid;
  std::vector<Observable> observables;
  std::optional<std::size_t> top_k;
  LogBase log_base = LogBase::kNatural;
  Sector sector;
  LanczosOptions lanczos;
  ChannelOptions channel;
  std::size_t workers = 1;
};

struct ScanRow {
  double j = 0.0;
  double p_x = 0.0;
  bool ok = true;
  std::string error;
  double entropy = 0.0;
  double purity = 0.0;
  double lz_expectation = 0.0;
  double ground_energy = 0.0;
  std::size_t degeneracy = 0;
  std::size_t rank = 0;
  std::vector<Moments> moments;  // one per observable
};

// Rows ordered J-major then p_x. Failures are recorded in the row; the scan
// continues.
std::vector<ScanRow> scan(const ScanConfig& config);

}  // namespace ghsc
