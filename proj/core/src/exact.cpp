#include "ghsc/exact.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <tuple>

#include "ghsc/code.hpp"
#include "ghsc/errors.hpp"

namespace ghsc {

namespace {

constexpr std::size_t kMaxStateQubits = 30;

std::complex<double> i_power(unsigned k) {
  static const std::complex<double> table[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  return table[k % 4];
}

double parity_sign(std::uint64_t z, std::uint64_t b) { return (std::popcount(z & b) & 1) ? -1.0 : 1.0; }

void require_qubits(std::size_t n) {
  if (n > kMaxStateQubits) throw SizeError("state vectors are limited to " + std::to_string(kMaxStateQubits) + " qubits");
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

StateVector::StateVector(std::size_t num_qubits) : num_qubits_(num_qubits) {
  require_qubits(num_qubits);
  amps_ = Amplitudes::Zero(Eigen::Index{1} << num_qubits);
}

StateVector::StateVector(std::size_t num_qubits, Amplitudes amplitudes) : num_qubits_(num_qubits), amps_(std::move(amplitudes)) {
  require_qubits(num_qubits);
  if (amps_.size() != (Eigen::Index{1} << num_qubits)) throw DimensionError("amplitude vector has wrong length");
}

StateVector StateVector::basis_state(std::size_t num_qubits, std::uint64_t index) {
  StateVector s(num_qubits);
  s.amps_[static_cast<Eigen::Index>(index)] = 1.0;
  return s;
}

StateVector& StateVector::normalize() {
  const double n = amps_.norm();
  if (n == 0.0) throw NumericalError("cannot normalize the zero vector", 0.0);
  amps_ /= n;
  return *this;
}

SparsePauliMatrix::SparsePauliMatrix(const PauliSum& sum) : num_qubits_(sum.num_qubits()) {
  require_qubits(num_qubits_);
  const auto dim = Eigen::Index{1} << num_qubits_;
  diagonal_ = Eigen::VectorXcd::Zero(dim);
  std::map<std::uint64_t, std::size_t> group_of;
  for (const auto& t : sum.terms()) {
    if (t.coeff == 0.0) continue;
    norm_bound_ += std::abs(t.coeff);
    const std::uint64_t x = t.op.x_mask(), z = t.op.z_mask();
    const auto c = t.coeff * i_power(t.op.xz_phase_exponent());
    if (x == 0) {
      for (Eigen::Index b = 0; b < dim; ++b) diagonal_[b] += c * parity_sign(z, static_cast<std::uint64_t>(b));
      continue;
    }
    auto [it, inserted] = group_of.try_emplace(x, groups_.size());
    if (inserted) groups_.push_back({x, {}});
    groups_[it->second].z_terms.emplace_back(z, c);
  }
}

void SparsePauliMatrix::apply(const Amplitudes& in, Amplitudes& out) const {
  if (in.size() != diagonal_.size()) throw DimensionError("vector length does not match operator");
  out = diagonal_.cwiseProduct(in);
  const auto dim = static_cast<std::uint64_t>(in.size());
  for (const auto& g : groups_) {
    for (std::uint64_t b = 0; b < dim; ++b) {
      std::complex<double> c = 0.0;
      for (const auto& [z, coeff] : g.z_terms) c += coeff * parity_sign(z, b);
      out[static_cast<Eigen::Index>(b ^ g.x)] += c * in[static_cast<Eigen::Index>(b)];
    }
  }
}

Amplitudes SparsePauliMatrix::operator*(const Amplitudes& in) const {
  Amplitudes out;
  apply(in, out);
  return out;
}

const char* to_string(Model m) {
  switch (m) {
    case Model::kLghm: return "LGHM";
    case Model::kGh: return "GH";
    case Model::kTc: return "TC";
  }
  return "?";
}

Model parse_model(std::string_view name) {
  std::string up(name);
  std::transform(up.begin(), up.end(), up.begin(), [](unsigned char c) { return std::toupper(c); });
  if (up == "LGHM") return Model::kLghm;
  if (up == "GH") return Model::kGh;
  if (up == "TC") return Model::kTc;
  throw Error("unsupported model tag '" + std::string(name) + "' (expected LGHM, GH or TC)");
}

std::size_t model_qubits(Model model, const LatticeGeometry& geom) {
  switch (model) {
    case Model::kTc: return geom.num_links();
    case Model::kGh: return geom.num_vertices() + geom.num_links();
    case Model::kLghm: return geom.num_vertices() + geom.num_plaquettes() + geom.num_links();
  }
  return 0;
}

HamiltonianSpec build_hamiltonian(Model model, const LatticeGeometry& geom, double j) {
  if (!(j >= 0.0) || !std::isfinite(j)) throw RangeError("coupling J must be finite and >= 0");
  const std::size_t n = model_qubits(model, geom);
  const std::size_t nv = geom.num_vertices(), np = geom.num_plaquettes();
  HamiltonianSpec h{model, geom, j, PauliSum(n)};
  auto single = [n](std::size_t q, char c) { return PauliOperator::single(n, q, c); };

  if (model == Model::kTc) {
    for (std::size_t v = 0; v < nv; ++v) h.terms.add(-1.0, vertex_star_x(geom, v));
    for (std::size_t p = 0; p < np; ++p) h.terms.add(-1.0, plaquette_z(geom, p));
    for (auto l : geom.non_rough_links()) h.terms.add(-j, single(l, 'Z'));
    for (auto l : geom.non_smooth_links()) h.terms.add(-j, single(l, 'X'));
    return h;
  }
  if (model == Model::kGh) {
    const auto link = [nv](std::size_t l) { return nv + l; };
    for (std::size_t v = 0; v < nv; ++v) h.terms.add(-1.0, single(v, 'X'));
    for (auto l : geom.non_smooth_links()) h.terms.add(-j, single(link(l), 'X'));
    for (std::size_t p = 0; p < np; ++p) {
      std::vector<std::size_t> qs;
      for (auto l : geom.boundary(p)) qs.push_back(link(l));
      h.terms.add(-1.0, PauliOperator::z_string(n, qs));
    }
    for (const auto& l : geom.links()) {
      if (l.vertices.size() != 2) continue;
      const std::vector<std::size_t> qs{l.vertices[0], l.vertices[1], link(l.id)};
      h.terms.add(-j, PauliOperator::z_string(n, qs));
    }
    return h;
  }
  const LghmLayout q(geom);
  for (std::size_t v = 0; v < nv; ++v) h.terms.add(-1.0, single(q.vertex(v), 'X'));
  for (const auto& l : geom.links()) {
    if (l.plaquettes.size() != 2) continue;
    const std::vector<std::size_t> qs{q.plaquette(l.plaquettes[0]), q.plaquette(l.plaquettes[1]), q.link(l.id)};
    h.terms.add(-j, PauliOperator::x_string(n, qs));
  }
  for (std::size_t p = 0; p < np; ++p) h.terms.add(-1.0, single(q.plaquette(p), 'Z'));
  for (const auto& l : geom.links()) {
    if (l.vertices.size() != 2) continue;
    const std::vector<std::size_t> qs{q.vertex(l.vertices[0]), q.vertex(l.vertices[1]), q.link(l.id)};
    h.terms.add(-j, PauliOperator::z_string(n, qs));
  }
  return h;
}

SectorOperators sector_operators(Model model, const LatticeGeometry& geom) {
  switch (model) {
    case Model::kTc: return {rough_parity_op(geom), smooth_parity_op(geom), logical_z_op(geom)};
    case Model::kGh: {
      const std::size_t n = model_qubits(model, geom), nv = geom.num_vertices();
      std::vector<std::size_t> vs, sz, lz;
      for (std::size_t v = 0; v < nv; ++v) vs.push_back(v);
      for (auto l : symmetry_supports(geom).smooth_all) sz.push_back(nv + l);
      for (auto l : logical_supports(geom).lz_support) lz.push_back(nv + l);
      return {PauliOperator::x_string(n, vs), PauliOperator::z_string(n, sz), PauliOperator::z_string(n, lz)};
    }
    case Model::kLghm: {
      const LghmLayout q(geom);
      const std::size_t n = q.num_qubits();
      std::vector<std::size_t> vs, ps;
      for (std::size_t v = 0; v < geom.num_vertices(); ++v) vs.push_back(q.vertex(v));
      for (std::size_t p = 0; p < geom.num_plaquettes(); ++p) ps.push_back(q.plaquette(p));
      return {PauliOperator::x_string(n, vs), PauliOperator::z_string(n, ps), embed_links(geom, logical_z_op(geom))};
    }
  }
  throw Error("unknown model");
}

EigenPair lanczos_lowest(const SparsePauliMatrix& op, const std::vector<Amplitudes>& locked,
                         const LanczosOptions& options, std::uint64_t stream) {
  const auto dim = static_cast<Eigen::Index>(op.dimension());
  if (locked.size() >= static_cast<std::size_t>(dim)) throw NumericalError("no complement left to search", 0.0);
  std::mt19937_64 rng(options.seed ^ (0xbf58476d1ce4e5b9ULL * (stream + 1)));

  auto orthogonalize = [&locked](Amplitudes& w, const std::vector<Amplitudes>& basis) {
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& u : locked) w -= u.dot(w) * u;
      for (const auto& u : basis) w -= u.dot(w) * u;
    }
  };

  Amplitudes start(dim);
  for (Eigen::Index i = 0; i < dim; ++i) start[i] = {uniform01(rng) - 0.5, uniform01(rng) - 0.5};
  orthogonalize(start, {});
  start.normalize();

  const double scale = std::max(1.0, op.norm_bound());
  const std::size_t max_krylov = std::min<std::size_t>(options.max_krylov, static_cast<std::size_t>(dim) - locked.size());
  EigenPair best;
  best.residual = std::numeric_limits<double>::infinity();
  constexpr int kRestarts = 20;
  for (int restart = 0; restart < kRestarts; ++restart) {
    std::vector<Amplitudes> basis{start};
    std::vector<double> alpha, beta;
    Amplitudes w;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
    bool done = false;
    for (std::size_t j = 0; j < max_krylov && !done; ++j) {
      op.apply(basis[j], w);
      alpha.push_back(basis[j].dot(w).real());
      w -= alpha.back() * basis[j];
      if (j > 0) w -= beta.back() * basis[j - 1];
      orthogonalize(w, basis);
      const double b = w.norm();
      const std::size_t m = alpha.size();
      const bool last = b < 1e-12 * scale || m == max_krylov;
      if (last || m % 5 == 0) {
        Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(alpha.data(), static_cast<Eigen::Index>(m));
        Eigen::VectorXd e = m > 1 ? Eigen::VectorXd(Eigen::Map<Eigen::VectorXd>(beta.data(), static_cast<Eigen::Index>(m - 1)))
                                  : Eigen::VectorXd();
        tri.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
        const double estimate = b * std::abs(tri.eigenvectors()(static_cast<Eigen::Index>(m - 1), 0));
        if (last || estimate < 0.1 * options.residual_tol * scale) done = true;
      }
      if (!done) {
        beta.push_back(b);
        basis.push_back(w / b);
      }
    }
    const Eigen::VectorXd y = tri.eigenvectors().col(0);
    Amplitudes x = Amplitudes::Zero(dim);
    for (Eigen::Index i = 0; i < y.size(); ++i) x += y[i] * basis[static_cast<std::size_t>(i)];
    orthogonalize(x, {});
    x.normalize();
    op.apply(x, w);
    const double theta = x.dot(w).real();
    const double residual = (w - theta * x).norm();
    if (residual < best.residual) best = {theta, x, residual};
    if (residual <= options.residual_tol * scale) return best;
    start = x;
  }
  throw NumericalError("Lanczos did not converge", best.residual);
}

std::vector<EigenPair> ground_space(const SparsePauliMatrix& op, const LanczosOptions& options) {
  std::vector<EigenPair> found;
  std::vector<Amplitudes> locked;
  double e0 = std::numeric_limits<double>::infinity();
  for (std::uint64_t stream = 0;; ++stream) {
    if (locked.size() >= op.dimension() || found.size() >= options.max_degeneracy) break;
    auto pair = lanczos_lowest(op, locked, options, stream);
    const double tol = options.degeneracy_tol * std::max(1.0, std::abs(e0));
    if (pair.value > e0 + tol) break;
    e0 = std::min(e0, pair.value);
    locked.push_back(pair.vector);
    found.push_back(std::move(pair));
    std::erase_if(found, [&](const EigenPair& p) { return p.value > e0 + tol; });
  }
  return found;
}

GroundState ground_state_in_sector(const HamiltonianSpec& h, const Sector& sector, const LanczosOptions& options) {
  const auto ops = sector_operators(h.model, h.geometry);
  for (const auto* s : {&ops.p, &ops.sz, &ops.lz}) {
    if (!h.terms.commutes_with(*s)) throw Error("sector operator " + s->str() + " does not commute with the Hamiltonian");
  }
  const SparsePauliMatrix hm(h.terms);
  const auto space = ground_space(hm, options);
  const auto g = static_cast<Eigen::Index>(space.size());

  const std::size_t n = h.terms.num_qubits();
  std::vector<Eigen::MatrixXcd> proj;
  for (const auto* s : {&ops.p, &ops.sz, &ops.lz}) {
    Eigen::MatrixXcd a(g, g);
    for (Eigen::Index c = 0; c < g; ++c) {
      const auto sv = apply_pauli(StateVector(n, space[static_cast<std::size_t>(c)].vector), *s);
      for (Eigen::Index r = 0; r < g; ++r) a(r, c) = space[static_cast<std::size_t>(r)].vector.dot(sv.amplitudes());
    }
    proj.push_back(a);
  }
  // Weights 1, 1/2, 1/4 give distinct sums for all eight label triples.
  const Eigen::MatrixXcd mix = proj[0] + 0.5 * proj[1] + 0.25 * proj[2];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (mix + mix.adjoint()));

  GroundState out;
  out.degeneracy = space.size();
  out.sector = sector;
  std::optional<Eigen::Index> pick;
  for (Eigen::Index k = 0; k < g; ++k) {
    const Eigen::VectorXcd y = es.eigenvectors().col(k);
    int labels[3];
    for (int s = 0; s < 3; ++s) {
      const double v = y.dot(proj[static_cast<std::size_t>(s)] * y).real();
      if (std::abs(std::abs(v) - 1.0) > 1e-6) {
        throw NumericalError("ground space is not closed under the sector operators", std::abs(std::abs(v) - 1.0));
      }
      labels[s] = v > 0 ? 1 : -1;
    }
    if (labels[0] == sector.p && labels[1] == sector.sz && labels[2] == sector.lz) {
      ++out.sector_multiplicity;
      if (!pick) pick = k;
    }
  }
  if (!pick) {
    throw SectorNotFoundError("sector (" + std::to_string(sector.p) + "," + std::to_string(sector.sz) + "," +
                              std::to_string(sector.lz) + ") is absent from the " + std::to_string(g) +
                              "-fold ground space");
  }
  const Eigen::VectorXcd y = es.eigenvectors().col(*pick);
  Amplitudes x = Amplitudes::Zero(static_cast<Eigen::Index>(hm.dimension()));
  for (Eigen::Index i = 0; i < g; ++i) x += y[i] * space[static_cast<std::size_t>(i)].vector;
  out.state = StateVector(n, x);
  out.state.normalize();
  // Fix the global phase so the largest amplitude is real and positive.
  Eigen::Index arg = 0;
  out.state.amplitudes().cwiseAbs().maxCoeff(&arg);
  const auto a = out.state.amplitudes()[arg];
  out.state.amplitudes() *= std::conj(a) / std::abs(a);

  const Amplitudes hx = hm * out.state.amplitudes();
  out.energy = out.state.amplitudes().dot(hx).real();
  out.residual = (hx - out.energy * out.state.amplitudes()).norm();
  return out;
}

StateVector apply_pauli(const StateVector& state, const PauliOperator& op) {
  if (op.num_qubits() != state.num_qubits()) throw DimensionError("operator and state sizes differ");
  const std::uint64_t x = op.x_mask(), z = op.z_mask();
  const auto ph = i_power(op.xz_phase_exponent());
  StateVector out(state.num_qubits());
  const auto dim = static_cast<std::uint64_t>(state.dimension());
  for (std::uint64_t b = 0; b < dim; ++b) {
    out.amplitudes()[static_cast<Eigen::Index>(b ^ x)] = ph * parity_sign(z, b) * state[b];
  }
  return out;
}

double expectation(const StateVector& state, const PauliOperator& op) {
  if (op.num_qubits() != state.num_qubits()) throw DimensionError("operator and state sizes differ");
  if (!op.is_hermitian()) throw HermiticityError("expectation of non-Hermitian operator " + op.str());
  return state.amplitudes().dot(apply_pauli(state, op).amplitudes()).real();
}

std::complex<double> expectation(const StateVector& state, const PauliSum& op) {
  const SparsePauliMatrix m(op);
  return state.amplitudes().dot(m * state.amplitudes());
}

double energy_variance(const StateVector& state, const SparsePauliMatrix& h) {
  const Amplitudes hx = h * state.amplitudes();
  const double e = state.amplitudes().dot(hx).real() / state.amplitudes().squaredNorm();
  return (hx - e * state.amplitudes()).squaredNorm();
}

void apply_hadamard(StateVector& state, std::size_t q) {
  if (q >= state.num_qubits()) throw DimensionError("qubit index out of range");
  const double r = 1.0 / std::sqrt(2.0);
  auto& a = state.amplitudes();
  const std::uint64_t bit = std::uint64_t{1} << q, dim = state.dimension();
  for (std::uint64_t b = 0; b < dim; ++b) {
    if (b & bit) continue;
    const auto i0 = static_cast<Eigen::Index>(b), i1 = static_cast<Eigen::Index>(b | bit);
    const auto a0 = a[i0], a1 = a[i1];
    a[i0] = r * (a0 + a1);
    a[i1] = r * (a0 - a1);
  }
}

void apply_cz(StateVector& state, std::size_t qa, std::size_t qb) {
  if (qa >= state.num_qubits() || qb >= state.num_qubits()) throw DimensionError("qubit index out of range");
  const std::uint64_t m = (std::uint64_t{1} << qa) | (std::uint64_t{1} << qb), dim = state.dimension();
  auto& a = state.amplitudes();
  for (std::uint64_t b = 0; b < dim; ++b)
    if ((b & m) == m) a[static_cast<Eigen::Index>(b)] = -a[static_cast<Eigen::Index>(b)];
}

namespace {

void require_lghm(std::size_t n, const LatticeGeometry& geom) {
  if (n != model_qubits(Model::kLghm, geom)) {
    throw DimensionError("mapping circuit expects " + std::to_string(model_qubits(Model::kLghm, geom)) +
                         " qubits (vertices, plaquettes, links), got " + std::to_string(n));
  }
}

// Gate list of U_p (plaquette layer) or U_v (vertex layer): Hadamard targets
// and CZ pairs.
struct Layer {
  std::vector<std::size_t> hadamards;
  std::vector<std::pair<std::size_t, std::size_t>> czs;
};

Layer plaquette_layer(const LatticeGeometry& g) {
  const LghmLayout q(g);
  Layer layer;
  for (std::size_t p = 0; p < g.num_plaquettes(); ++p) {
    layer.hadamards.push_back(q.plaquette(p));
    for (auto l : g.boundary(p)) layer.czs.emplace_back(q.plaquette(p), q.link(l));
  }
  return layer;
}

Layer vertex_layer(const LatticeGeometry& g) {
  const LghmLayout q(g);
  Layer layer;
  for (std::size_t l = 0; l < g.num_links(); ++l) layer.hadamards.push_back(q.link(l));
  for (std::size_t v = 0; v < g.num_vertices(); ++v)
    for (auto l : g.star(v)) layer.czs.emplace_back(q.vertex(v), q.link(l));
  return layer;
}

void run(StateVector& s, const Layer& layer) {
  for (auto h : layer.hadamards) apply_hadamard(s, h);
  for (auto [a, b] : layer.czs) apply_cz(s, a, b);
  for (auto h : layer.hadamards) apply_hadamard(s, h);
}

PauliOperator conjugate(PauliOperator p, const Layer& layer) {
  for (auto h : layer.hadamards) p = conjugate_h(p, h);
  for (auto [a, b] : layer.czs) p = conjugate_cz(p, a, b);
  for (auto h : layer.hadamards) p = conjugate_h(p, h);
  return p;
}

PauliSum conjugate(const PauliSum& s, const std::vector<Layer>& layers) {
  PauliSum out(s.num_qubits());
  for (const auto& t : s.terms()) {
    PauliOperator p = t.op;
    for (const auto& layer : layers) p = conjugate(p, layer);
    out.add(t.coeff, p);
  }
  return out;
}

std::vector<Layer> layers_for(const LatticeGeometry& geom, Direction dir) {
  if (dir == Direction::kForward) return {plaquette_layer(geom), vertex_layer(geom)};
  return {vertex_layer(geom), plaquette_layer(geom)};
}

}  // namespace

StateVector apply_mapping_circuit(const StateVector& state, const LatticeGeometry& geom, Direction dir) {
  require_lghm(state.num_qubits(), geom);
  StateVector s = state;
  for (const auto& layer : layers_for(geom, dir)) run(s, layer);
  return s;
}

PauliOperator apply_mapping_circuit(const PauliOperator& op, const LatticeGeometry& geom, Direction dir) {
  require_lghm(op.num_qubits(), geom);
  PauliOperator p = op;
  for (const auto& layer : layers_for(geom, dir)) p = conjugate(p, layer);
  return p;
}

PauliSum apply_mapping_circuit(const PauliSum& op, const LatticeGeometry& geom, Direction dir) {
  require_lghm(op.num_qubits(), geom);
  return conjugate(op, layers_for(geom, dir));
}

PauliSum apply_plaquette_circuit(const PauliSum& op, const LatticeGeometry& geom) {
  require_lghm(op.num_qubits(), geom);
  return conjugate(op, {plaquette_layer(geom)});
}

SectorRestriction restrict_to_sector(const PauliSum& op, const std::vector<std::pair<std::size_t, char>>& fixed,
                                     const std::vector<std::size_t>& kept) {
  std::vector<bool> covered(op.num_qubits(), false);
  for (auto [q, c] : fixed) covered.at(q) = true;
  for (auto q : kept) covered.at(q) = true;
  PauliSum out(kept.size());
  for (const auto& t : op.terms()) {
    for (std::size_t q = 0; q < op.num_qubits(); ++q) {
      if (!covered[q] && t.op.letter(q) != 'I') return {std::nullopt, t.op.str()};
    }
    for (auto [q, c] : fixed) {
      const char l = t.op.letter(q);
      if (l != 'I' && l != c) return {std::nullopt, t.op.str()};
    }
    BitVector x(kept.size()), z(kept.size());
    for (std::size_t i = 0; i < kept.size(); ++i) {
      x[i] = t.op.x(kept[i]);
      z[i] = t.op.z(kept[i]);
    }
    out.add(t.coeff, PauliOperator(std::move(x), std::move(z)));
  }
  return {std::move(out), {}};
}

SectorRestriction restrict_to_sector(const PauliOperator& op, const std::vector<std::pair<std::size_t, char>>& fixed,
                                     const std::vector<std::size_t>& kept) {
  return restrict_to_sector(PauliSum::from_operator(op), fixed, kept);
}

bool MappingReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const MappingCheck& c) { return c.passed; });
}

Eigen::MatrixXcd dense_matrix(const PauliSum& op) {
  if (op.num_qubits() > 14) throw SizeError("dense matrices are limited to 14 qubits");
  const SparsePauliMatrix m(op);
  const auto dim = static_cast<Eigen::Index>(m.dimension());
  Eigen::MatrixXcd out(dim, dim);
  Amplitudes e = Amplitudes::Zero(dim), col;
  for (Eigen::Index b = 0; b < dim; ++b) {
    e.setZero();
    e[b] = 1.0;
    m.apply(e, col);
    out.col(b) = col;
  }
  return out;
}

Eigen::VectorXd gauge_fixed_spectrum(const LatticeGeometry& geom, double j) {
  const LghmLayout q(geom);
  const std::size_t n = q.num_qubits();
  require_qubits(n);
  const std::size_t nv = geom.num_vertices(), shift = nv + geom.num_plaquettes();
  const auto h = build_hamiltonian(Model::kLghm, geom, j);
  const SparsePauliMatrix hm(h.terms);
  const auto links_dim = Eigen::Index{1} << geom.num_links();
  const double plus = std::pow(2.0, -0.5 * static_cast<double>(nv));
  Eigen::MatrixXcd block(links_dim, links_dim);
  double leak = 0.0;
  for (Eigen::Index b = 0; b < links_dim; ++b) {
    StateVector e(n);
    for (std::uint64_t vc = 0; vc < (std::uint64_t{1} << nv); ++vc) {
      e.amplitudes()[static_cast<Eigen::Index>(vc | (static_cast<std::uint64_t>(b) << shift))] = plus;
    }
    const auto pre = apply_mapping_circuit(e, geom, Direction::kInverse);
    const StateVector mid(n, hm * pre.amplitudes());
    const auto post = apply_mapping_circuit(mid, geom, Direction::kForward);
    double kept = 0.0;
    for (Eigen::Index b2 = 0; b2 < links_dim; ++b2) {
      std::complex<double> acc = 0.0;
      for (std::uint64_t vc = 0; vc < (std::uint64_t{1} << nv); ++vc) {
        acc += plus * post[vc | (static_cast<std::uint64_t>(b2) << shift)];
      }
      block(b2, b) = acc;
      kept += std::norm(acc);
    }
    leak = std::max(leak, std::abs(post.amplitudes().squaredNorm() - kept));
  }
  if (leak > 1e-9) throw NumericalError("transformed Hamiltonian leaks out of the gauge-fixed sector", leak);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (block + block.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

MappingReport verify_mapping(const LatticeGeometry& geom, const MappingOptions& options) {
  MappingReport report;
  const LghmLayout q(geom);
  const std::size_t n = q.num_qubits();
  std::vector<std::pair<std::size_t, char>> gauge_fixing;
  for (std::size_t v = 0; v < geom.num_vertices(); ++v) gauge_fixing.emplace_back(q.vertex(v), 'X');
  for (std::size_t p = 0; p < geom.num_plaquettes(); ++p) gauge_fixing.emplace_back(q.plaquette(p), 'Z');
  std::vector<std::pair<std::size_t, char>> plaquette_fixing(gauge_fixing.begin() + static_cast<long>(geom.num_vertices()),
                                                             gauge_fixing.end());
  std::vector<std::size_t> links, vertices_links;
  for (std::size_t v = 0; v < geom.num_vertices(); ++v) vertices_links.push_back(q.vertex(v));
  for (std::size_t l = 0; l < geom.num_links(); ++l) {
    links.push_back(q.link(l));
    vertices_links.push_back(q.link(l));
  }

  auto compare_sums = [](const PauliSum& a, const PauliSum& b) {
    PauliSum diff = a;
    diff += b.scaled(-1.0);
    double worst = 0.0;
    for (const auto& t : diff.simplified(0.0).terms()) worst = std::max(worst, std::abs(t.coeff));
    return worst;
  };
  auto fmt = [](double x) {
    std::ostringstream os;
    os << x;
    return os.str();
  };

  for (double j : options.j_values) {
    const auto h = build_hamiltonian(Model::kLghm, geom, j);
    {
      MappingCheck c{"terms_lghm_to_tc_J=" + fmt(j), true, 0.0, {}};
      const auto r = restrict_to_sector(apply_mapping_circuit(h.terms, geom, Direction::kForward), gauge_fixing, links);
      if (!r.restricted) {
        c.passed = false;
        c.detail = "term " + r.offending_term + " does not preserve X_v=+1, Z_p=+1";
      } else {
        c.residual = compare_sums(*r.restricted, build_hamiltonian(Model::kTc, geom, j).terms);
        c.passed = c.residual <= options.tolerance;
      }
      report.checks.push_back(c);
    }
    {
      MappingCheck c{"terms_lghm_to_gh_J=" + fmt(j), true, 0.0, {}};
      const auto r = restrict_to_sector(apply_plaquette_circuit(h.terms, geom), plaquette_fixing, vertices_links);
      if (!r.restricted) {
        c.passed = false;
        c.detail = "term " + r.offending_term + " does not preserve Z_p=+1";
      } else {
        c.residual = compare_sums(*r.restricted, build_hamiltonian(Model::kGh, geom, j).terms);
        c.passed = c.residual <= options.tolerance;
      }
      report.checks.push_back(c);
    }
  }

  const auto lx = embed_links(geom, logical_x_op(geom));
  const auto lz = embed_links(geom, logical_z_op(geom));
  report.checks.push_back({"logical_x_invariant", apply_mapping_circuit(lx, geom, Direction::kForward) == lx, 0.0, {}});
  report.checks.push_back({"logical_z_invariant", apply_mapping_circuit(lz, geom, Direction::kForward) == lz, 0.0, {}});

  const auto sym = sector_operators(Model::kLghm, geom);
  for (auto [name, op, target] : {std::tuple{"p_symmetry_image", sym.p, rough_parity_op(geom)},
                                  std::tuple{"sz_symmetry_image", sym.sz, smooth_parity_op(geom)}}) {
    const auto r = restrict_to_sector(apply_mapping_circuit(op, geom, Direction::kForward), gauge_fixing, links);
    MappingCheck c{name, true, 0.0, {}};
    c.passed = r.restricted && r.restricted->terms().size() == 1 && r.restricted->terms()[0].op == target &&
               std::abs(r.restricted->terms()[0].coeff - 1.0) == 0.0;
    if (!c.passed) c.detail = "image is not " + target.str();
    report.checks.push_back(c);
  }

  {
    const auto h = build_hamiltonian(Model::kLghm, geom, 0.7);
    const auto back = apply_mapping_circuit(apply_mapping_circuit(h.terms, geom, Direction::kForward), geom, Direction::kInverse);
    MappingCheck c{"pauli_roundtrip", true, 0.0, {}};
    c.residual = compare_sums(back, h.terms);
    c.passed = c.residual == 0.0;
    report.checks.push_back(c);
  }

  if (n <= options.max_spectral_qubits) {
    std::mt19937_64 rng(12345);
    StateVector s(n);
    for (Eigen::Index i = 0; i < s.amplitudes().size(); ++i) s.amplitudes()[i] = {uniform01(rng) - 0.5, uniform01(rng) - 0.5};
    s.normalize();
    const auto back = apply_mapping_circuit(apply_mapping_circuit(s, geom, Direction::kForward), geom, Direction::kInverse);
    MappingCheck c{"state_roundtrip", true, 0.0, {}};
    c.residual = (back.amplitudes() - s.amplitudes()).norm();
    c.passed = c.residual <= 1e-12;
    report.checks.push_back(c);

    for (double j : options.j_values) {
      MappingCheck sc{"spectrum_J=" + fmt(j), true, 0.0, {}};
      try {
        const auto mapped = gauge_fixed_spectrum(geom, j);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_matrix(build_hamiltonian(Model::kTc, geom, j).terms),
                                                           Eigen::EigenvaluesOnly);
        sc.residual = (mapped - es.eigenvalues()).cwiseAbs().maxCoeff();
        sc.passed = sc.residual <= options.tolerance;
      } catch (const Error& e) {
        sc.passed = false;
        sc.detail = e.what();
      }
      report.checks.push_back(sc);
    }
  } else {
    report.checks.push_back({"spectrum", true, 0.0, "skipped: " + std::to_string(n) + " qubits exceed the spectral cap"});
  }
  return report;
}

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_f64(std::ostream& os, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) os.put(static_cast<char>((v >> (8 * i)) & 0xff));
}
std::uint64_t get_le(std::istream& is, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = is.get();
    if (c == EOF) throw Error("truncated state file");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return v;
}

constexpr char kMagic[8] = {'G', 'H', 'S', 'C', 'S', 'T', '0', '1'};

}  // namespace

void write_state_binary(const std::string& path, const StateVector& state) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  os.write(kMagic, 8);
  put_u32(os, static_cast<std::uint32_t>(state.num_qubits()));
  put_u32(os, 0);
  for (const auto& a : state.amplitudes()) {
    put_f64(os, a.real());
    put_f64(os, a.imag());
  }
  if (!os) throw Error("write failed for " + path);
}

StateVector read_state_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  char magic[8];
  is.read(magic, 8);
  if (!is || !std::equal(magic, magic + 8, kMagic)) throw Error(path + " is not a state dump");
  const auto n = static_cast<std::size_t>(get_le(is, 4));
  get_le(is, 4);
  StateVector s(n);
  for (Eigen::Index i = 0; i < s.amplitudes().size(); ++i) {
    const double re = std::bit_cast<double>(get_le(is, 8));
    const double im = std::bit_cast<double>(get_le(is, 8));
    s.amplitudes()[i] = {re, im};
  }
  return s;
}

}  // namespace ghsc
