#include "ghsc/channel.hpp"

#include <bit>
#include <cmath>
#include <optional>

#include "ghsc/code.hpp"
#include "ghsc/errors.hpp"
#include "ghsc/parallel.hpp"

namespace ghsc {

namespace {

// <psi| P |psi> for any Pauli string, Hermitian or not.
std::complex<double> raw_expectation(const StateVector& psi, const PauliOperator& op) {
  return psi.amplitudes().dot(apply_pauli(psi, op).amplitudes());
}

}  // namespace

std::size_t DecoheredState::rank(double tol) const {
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < eigenvalues_.size(); ++i)
    if (eigenvalues_[i] > tol) ++r;
  return r;
}

DecoheredState decohere(const StateVector& psi, const LatticeGeometry& geom, double p_x, const ChannelOptions& options) {
  if (psi.num_qubits() != geom.num_links()) {
    throw DimensionError("state has " + std::to_string(psi.num_qubits()) + " qubits, lattice has " +
                         std::to_string(geom.num_links()) + " links");
  }
  if (!(p_x >= 0.0 && p_x <= 0.5)) throw RangeError("p_x must lie in [0, 1/2], got " + std::to_string(p_x));
  DecoheredState d(geom);
  d.p_x_ = p_x;
  d.psi_ = psi;
  d.links_ = geom.non_smooth_links();
  const std::size_t nd = d.links_.size();
  if (nd > options.kraus_cap) {
    throw SizeError(std::to_string(nd) + " decohered links exceed the Kraus cap of " +
                    std::to_string(options.kraus_cap) + "; use a smaller geometry");
  }
  if (nd > options.max_gram_links) {
    throw SizeError(std::to_string(nd) + " decohered links give a " + std::to_string(std::uint64_t{1} << nd) +
                    "-dimensional Gram matrix; use a smaller geometry");
  }

  const std::uint64_t full = std::uint64_t{1} << nd;
  auto flip_mask = [&](std::uint64_t s) {
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < nd; ++i)
      if ((s >> i) & 1U) m |= std::uint64_t{1} << d.links_[i];
    return m;
  };
  // c(T) = <psi|X_T|psi>, indexed by subset T.
  const auto dim = static_cast<std::uint64_t>(psi.dimension());
  const auto& a = psi.amplitudes();
  std::vector<double> c(full);
  for (std::uint64_t t = 0; t < full; ++t) {
    const std::uint64_t m = flip_mask(t);
    std::complex<double> acc = 0.0;
    for (std::uint64_t b = 0; b < dim; ++b) {
      acc += std::conj(a[static_cast<Eigen::Index>(b)]) * a[static_cast<Eigen::Index>(b ^ m)];
    }
    c[t] = acc.real();
  }

  std::vector<std::uint64_t> subsets;
  for (std::uint64_t s = 0; s < full; ++s) {
    const int k = std::popcount(s);
    const double w = std::pow(p_x, k) * std::pow(1.0 - p_x, static_cast<int>(nd) - k);
    if (w <= 0.0) continue;
    subsets.push_back(s);
    d.masks_.push_back(flip_mask(s));
    d.weights_.push_back(w);
  }
  const auto nb = static_cast<Eigen::Index>(subsets.size());
  d.gram_.resize(nb, nb);
  for (Eigen::Index i = 0; i < nb; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double g = std::sqrt(d.weights_[static_cast<std::size_t>(i)] * d.weights_[static_cast<std::size_t>(j)]) *
                       c[subsets[static_cast<std::size_t>(i)] ^ subsets[static_cast<std::size_t>(j)]];
      d.gram_(i, j) = g;
      d.gram_(j, i) = g;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d.gram_, Eigen::EigenvaluesOnly);
  d.eigenvalues_ = es.eigenvalues().reverse();
  return d;
}

const char* to_string(LogBase b) { return b == LogBase::kTwo ? "2" : "e"; }

double entropy(const DecoheredState& d, std::optional<std::size_t> top_k, LogBase base) {
  const auto& ev = d.eigenvalues();
  auto count = static_cast<std::size_t>(ev.size());
  if (top_k) count = std::min(count, *top_k);
  double s = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    const double l = ev[static_cast<Eigen::Index>(i)];
    if (l > 0.0) s -= l * std::log(l);
  }
  return base == LogBase::kTwo ? s / std::log(2.0) : s;
}

double purity(const DecoheredState& d) { return d.eigenvalues().squaredNorm(); }

std::complex<double> channel_expectation(const DecoheredState& d, const PauliOperator& op) {
  if (op.num_qubits() != d.base_state().num_qubits()) throw DimensionError("operator and state sizes differ");
  double damp = 1.0;
  for (auto l : d.decohered_links())
    if (op.z(l)) damp *= 1.0 - 2.0 * d.p_x();
  if (damp == 0.0) return 0.0;
  return damp * raw_expectation(d.base_state(), op);
}

std::complex<double> channel_expectation_branchwise(const DecoheredState& d, const PauliOperator& op) {
  if (op.num_qubits() != d.base_state().num_qubits()) throw DimensionError("operator and state sizes differ");
  const std::size_t n = d.base_state().num_qubits();
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < d.num_branches(); ++i) {
    const auto xs = PauliOperator(BitVector(n, d.branch_masks()[i]), BitVector(n));
    acc += d.branch_weights()[i] * raw_expectation(apply_pauli(d.base_state(), xs), op);
  }
  return acc;
}

std::complex<double> channel_expectation(const DecoheredState& d, const PauliSum& op) {
  std::complex<double> acc = 0.0;
  for (const auto& t : op.terms()) acc += t.coeff * channel_expectation(d, t.op);
  return acc;
}

Moments observable_moments(const DecoheredState& d, const PauliSum& op) {
  if (!op.is_hermitian()) throw HermiticityError("observable " + op.str() + " is not Hermitian");
  Moments m;
  m.mean = channel_expectation(d, op).real();
  const double second = channel_expectation(d, (op * op).simplified()).real();
  m.variance = std::max(0.0, second - m.mean * m.mean);
  return m;
}

Eigen::MatrixXcd density_matrix(const DecoheredState& d) {
  const std::size_t n = d.base_state().num_qubits();
  if (n > 12) throw SizeError("dense density matrix limited to 12 qubits, got " + std::to_string(n));
  const auto dim = static_cast<Eigen::Index>(d.base_state().dimension());
  const auto& a = d.base_state().amplitudes();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t i = 0; i < d.num_branches(); ++i) {
    Eigen::VectorXcd v(dim);
    for (Eigen::Index b = 0; b < dim; ++b) v[b] = a[static_cast<Eigen::Index>(static_cast<std::uint64_t>(b) ^ d.branch_masks()[i])];
    rho.noalias() += d.branch_weights()[i] * v * v.adjoint();
  }
  return rho;
}

std::complex<double> omega_matrix_element(const DecoheredState& d, std::uint64_t s, std::uint64_t s_prime) {
  const auto& a = d.base_state().amplitudes();
  const auto dim = static_cast<std::uint64_t>(d.base_state().dimension());
  if (s >= dim || s_prime >= dim) throw DimensionError("basis label exceeds the link count");
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < d.num_branches(); ++i) {
    const std::uint64_t m = d.branch_masks()[i];
    acc += d.branch_weights()[i] * a[static_cast<Eigen::Index>(s ^ m)] * std::conj(a[static_cast<Eigen::Index>(s_prime ^ m)]);
  }
  return acc;
}

std::pair<std::size_t, std::size_t> default_gauge_plaquettes(const LatticeGeometry& geom) {
  const double cx = (static_cast<double>(geom.lx()) - 1.0) / 2.0;
  const double cy = (static_cast<double>(geom.ly()) - 1.0) / 2.0;
  // Plaquette (pr, pc) is centred at x = pc + 1/2, y = pr - 1/2 in vertex units.
  auto centre = [&](std::size_t p) {
    const std::size_t w = geom.lx() - 1;
    return std::pair{static_cast<double>(p % w) + 0.5, static_cast<double>(p / w) - 0.5};
  };
  std::optional<std::pair<std::size_t, std::size_t>> best;
  double best_d = 0.0;
  for (auto [p, q] : geom.dual_adjacency()) {
    if (geom.boundary(p).size() != 4 || geom.boundary(q).size() != 4) continue;
    if (p > q) std::swap(p, q);
    const auto [xp, yp] = centre(p);
    const auto [xq, yq] = centre(q);
    const double dx = (xp + xq) / 2.0 - cx, dy = (yp + yq) / 2.0 - cy;
    const double dist = dx * dx + dy * dy;
    if (!best || dist < best_d - 1e-12 || (std::abs(dist - best_d) <= 1e-12 && std::pair{p, q} < *best)) {
      best = std::pair{p, q};
      best_d = dist;
    }
  }
  if (!best) {
    throw GeometryError("lattice " + std::to_string(geom.lx()) + "x" + std::to_string(geom.ly()) +
                        " has no pair of adjacent bulk plaquettes");
  }
  return *best;
}

PauliSum gauge_observable(const LatticeGeometry& geom, std::size_t p1, std::size_t p2) {
  PauliSum s(geom.num_links());
  s.add(0.5, plaquette_z(geom, p1));
  s.add(0.5, plaquette_z(geom, p2));
  return s;
}

std::vector<GroundResult> tc_ground_states(const LatticeGeometry& geom, const std::vector<double>& j_grid,
                                           const Sector& sector, const LanczosOptions& lanczos, std::size_t workers) {
  return parallel_map(j_grid.size(), workers, [&](std::size_t i) {
    GroundResult out;
    try {
      out.state = ground_state_in_sector(build_hamiltonian(Model::kTc, geom, j_grid[i]), sector, lanczos);
    } catch (const Error& e) {
      out.error = e.what();
    }
    return out;
  });
}

std::vector<ScanRow> scan(const ScanConfig& config) {
  const auto& g = config.geometry;
  const auto grounds = tc_ground_states(g, config.j_grid, config.sector, config.lanczos, config.workers);

  const PauliOperator lz = logical_z_op(g);
  const std::size_t np = config.p_grid.size();
  return parallel_map(config.j_grid.size() * np, config.workers, [&](std::size_t idx) {
    const std::size_t ji = idx / np;
    ScanRow row;
    row.j = config.j_grid[ji];
    row.p_x = config.p_grid[idx % np];
    const auto& gs = grounds[ji];
    if (!gs.state) {
      row.ok = false;
      row.error = gs.error;
      return row;
    }
    row.ground_energy = gs.state->energy;
    row.degeneracy = gs.state->degeneracy;
    try {
      const auto d = decohere(gs.state->state, g, row.p_x, config.channel);
      row.entropy = entropy(d, config.top_k, config.log_base);
      row.purity = purity(d);
      row.rank = d.rank();
      row.lz_expectation = channel_expectation(d, lz).real();
      for (const auto& o : config.observables) row.moments.push_back(observable_moments(d, o.op));
    } catch (const Error& e) {
      row.ok = false;
      row.error = e.what();
      row.moments.clear();
    }
    return row;
  });
}

}  // namespace ghsc
