#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "ghsc/channel.hpp"
#include "ghsc/lattice.hpp"

namespace ghsc {

// artanh(1 - 2p). p = 0 gives +infinity, p = 1/2 gives 0; RangeError outside [0, 1/2].
double nishimori_beta(double p_x);
// Pure-Ising critical point, tanh(beta_c) = sqrt(2) - 1.
double onsager_tanh_beta_c();
// p with (1 - 2p)^2 = tanh(beta_c).
double purity_transition_p();

// Omega-basis labels are link bitmasks: bit l set <=> s_l = -1.
inline int link_sign(std::uint64_t s, std::size_t l) { return ((s >> l) & 1U) ? -1 : 1; }

// (1 + a)(1 + b), a and b the products of s over the left and right smooth paths.
double boundary_factor(std::uint64_t s, const LatticeGeometry& geom);

// Ising spins on a rows x cols grid with Z = sum_sigma exp(-beta sum J_b sigma sigma').
// Couplings are +-1, or 0 where the bond is absent.
struct RbimInstance {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<int> horizontal;  // rows x (cols-1), bond (r,c)-(r,c+1)
  std::vector<int> vertical;    // (rows-1) x cols, bond (r,c)-(r+1,c)
  double beta = 0.0;

  std::size_t num_spins() const { return rows * cols; }
  std::size_t num_bonds() const;
};

// Bonds on the vertex lattice of geom: s_l on every two-vertex link off the
// smooth paths, 0 on the smooth-path verticals.
RbimInstance rbim_instance(const LatticeGeometry& geom, std::uint64_t s, double beta);

enum class PartitionMethod { kAuto, kEnumeration, kTransferMatrix };
// Enumeration needs at most 24 spins, the transfer matrix at most 12 columns.
double exact_partition(const RbimInstance& inst, PartitionMethod method = PartitionMethod::kAuto);

// True iff s xor s' lies in the span of the vertex stars (zero bulk boundary).
bool same_class(const LatticeGeometry& geom, std::uint64_t s, std::uint64_t s_prime);
// Smallest label in the class of s.
std::uint64_t class_representative(const LatticeGeometry& geom, std::uint64_t s);
// One representative per class, ascending (2^(N - N_V) classes).
std::vector<std::uint64_t> class_representatives(const LatticeGeometry& geom);

// K_0 as printed: Z'/(2^N_BV cosh^N_BL beta), Z' over the instance above.
double k0_printed(const LatticeGeometry& geom, std::uint64_t s, double p_x);
// K_0 from the cycle expansion: vertices plus a ghost spin joined to every
// dangling link, smooth links locked to sigma sigma' = s_l, weight
// exp(+beta sum_{l not smooth} s_l sigma sigma'); K_0 = 2^(N_smooth - N_V - 3) Z / cosh^N_BL beta.
double k0_corrected(const LatticeGeometry& geom, std::uint64_t s, double p_x);

// Loop expansion of the J = 0 element split into the four cosets of the
// cycle group: loops only, loops x L_z, loops x L_z S~_Z, loops x S~_Z.
struct LoopClasses {
  double k0 = 0.0, k1 = 0.0, k2 = 0.0, k3 = 0.0;
  double a = 1.0, b = 1.0;  // left and right smooth-path sign products
};
LoopClasses classify_loops(const LatticeGeometry& geom, std::uint64_t s, double p_x);

struct OracleResult {
  double lhs = 0.0;
  bool delta = false;
  double lambda = 0.0;
  double k0 = 0.0;               // printed
  double rhs = 0.0;              // printed identity
  bool match = false;
  double k0_corrected = 0.0;
  double rhs_corrected = 0.0;
  bool match_corrected = false;
  // |lhs - rhs| / max(|lhs|, |rhs|), 0 when both vanish
  double residual = 0.0;
  double residual_corrected = 0.0;
};

// <Omega_s| E[rho] |Omega_s'> for the J = 0, L_z = +1 toric-code ground state
// against delta * Lambda(s) K_0(s) / 2^N. Decohered states are cached per p_x.
class MatrixElementOracle {
 public:
  explicit MatrixElementOracle(const LatticeGeometry& geom);
  const LatticeGeometry& geometry() const { return geom_; }
  const StateVector& state() const { return psi_; }
  OracleResult evaluate(std::uint64_t s, std::uint64_t s_prime, double p_x);

 private:
  LatticeGeometry geom_;
  StateVector psi_;
  std::map<double, std::unique_ptr<DecoheredState>> cache_;
};

// Square L x L periodic lattice, couplings J = -1 with probability p, energy
// -sum J sigma sigma'.
struct McPoint {
  std::size_t l = 8;
  double p = 0.0;
  double beta = 0.0;
};

struct McOptions {
  std::size_t thermalization = 2000;
  std::size_t sweeps = 10000;
  std::size_t realizations = 1;
  std::size_t bins = 20;
  std::uint64_t seed = 42;
  std::size_t workers = 1;
};

struct McEstimate {
  McPoint point;
  std::size_t realizations = 0;
  double energy = 0.0, energy_err = 0.0;
  double abs_m = 0.0, abs_m_err = 0.0;
  double m2 = 0.0, m4 = 0.0;
  double binder = 0.0, binder_err = 0.0;
  bool thermalized = true;
  // Seed of the first realization, for the log.
  std::uint64_t first_seed = 0;
};

// Errors are jackknife over disorder realizations (or over time bins when
// there is one realization). Realization r of point i uses
// seed_derive(options.seed, i * realizations + r).
std::vector<McEstimate> mc_scan(const std::vector<McPoint>& points, const McOptions& options);
McEstimate mc_estimate(const McPoint& point, const McOptions& options);

// Position where y1 - y2 first changes sign along x (linear interpolation);
// nullopt when it never does.
std::optional<double> crossing(const std::vector<double>& x, const std::vector<double>& y1,
                               const std::vector<double>& y2);

}  // namespace ghsc
