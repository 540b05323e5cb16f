#include "ghsc/rbim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <random>

#include "ghsc/errors.hpp"
#include "ghsc/exact.hpp"
#include "ghsc/parallel.hpp"
#include "ghsc/seed.hpp"

namespace ghsc {

namespace {

std::uint64_t mask_of(const std::vector<std::size_t>& links) {
  std::uint64_t m = 0;
  for (auto l : links) m |= std::uint64_t{1} << l;
  return m;
}

int sign_product(std::uint64_t s, std::uint64_t support) { return (std::popcount(s & support) & 1) ? -1 : 1; }

void require_small(const LatticeGeometry& geom) {
  if (geom.num_links() > 24) {
    throw SizeError("label enumeration limited to 24 links, got " + std::to_string(geom.num_links()));
  }
}

// XOR basis with distinct leading bits, fully reduced.
class XorBasis {
 public:
  void insert(std::uint64_t v) {
    v = reduce(v);
    if (v == 0) return;
    const int top = std::bit_width(v) - 1;
    for (auto& b : rows_)
      if ((b >> top) & 1U) b ^= v;
    rows_.push_back(v);
    std::sort(rows_.begin(), rows_.end(), std::greater<>());
  }
  // Minimum element of v + span.
  std::uint64_t reduce(std::uint64_t v) const {
    for (auto b : rows_) {
      const int top = std::bit_width(b) - 1;
      if ((v >> top) & 1U) v ^= b;
    }
    return v;
  }
  std::size_t size() const { return rows_.size(); }

 private:
  std::vector<std::uint64_t> rows_;
};

XorBasis star_basis(const LatticeGeometry& geom) {
  XorBasis b;
  for (std::size_t v = 0; v < geom.num_vertices(); ++v) b.insert(mask_of(geom.star(v)));
  return b;
}

double beta_finite(double p_x) {
  const double beta = nishimori_beta(p_x);
  if (!std::isfinite(beta)) throw RangeError("K_0 needs p_x > 0");
  return beta;
}

}  // namespace

double nishimori_beta(double p_x) {
  if (!(p_x >= 0.0 && p_x <= 0.5)) throw RangeError("p_x must lie in [0, 1/2], got " + std::to_string(p_x));
  if (p_x == 0.0) return std::numeric_limits<double>::infinity();
  if (p_x == 0.5) return 0.0;
  return std::atanh(1.0 - 2.0 * p_x);
}

double onsager_tanh_beta_c() { return std::sqrt(2.0) - 1.0; }

double purity_transition_p() { return 0.5 * (1.0 - std::sqrt(onsager_tanh_beta_c())); }

double boundary_factor(std::uint64_t s, const LatticeGeometry& geom) {
  const int a = sign_product(s, mask_of(geom.column_path(0)));
  const int b = sign_product(s, mask_of(geom.column_path(geom.lx() - 1)));
  return (1.0 + a) * (1.0 + b);
}

std::size_t RbimInstance::num_bonds() const {
  std::size_t n = 0;
  for (int j : horizontal) n += j != 0;
  for (int j : vertical) n += j != 0;
  return n;
}

RbimInstance rbim_instance(const LatticeGeometry& geom, std::uint64_t s, double beta) {
  RbimInstance inst;
  inst.rows = geom.ly();
  inst.cols = geom.lx();
  inst.beta = beta;
  inst.horizontal.assign(inst.rows * (inst.cols - 1), 0);
  inst.vertical.assign((inst.rows - 1) * inst.cols, 0);
  for (const auto& l : geom.links()) {
    if (l.smooth() || l.vertices.size() != 2) continue;
    const int j = link_sign(s, l.id);
    if (l.kind == LinkKind::kHorizontal) inst.horizontal[l.row * (inst.cols - 1) + l.col] = j;
    else inst.vertical[l.row * inst.cols + l.col] = j;
  }
  return inst;
}

namespace {

double partition_enumeration(const RbimInstance& inst) {
  const std::size_t n = inst.num_spins();
  if (n > 24) throw SizeError("enumeration limited to 24 spins, got " + std::to_string(n));
  struct Bond {
    std::size_t a, b;
    int j;
  };
  std::vector<Bond> bonds;
  for (std::size_t r = 0; r < inst.rows; ++r)
    for (std::size_t c = 0; c + 1 < inst.cols; ++c)
      if (int j = inst.horizontal[r * (inst.cols - 1) + c]) bonds.push_back({r * inst.cols + c, r * inst.cols + c + 1, j});
  for (std::size_t r = 0; r + 1 < inst.rows; ++r)
    for (std::size_t c = 0; c < inst.cols; ++c)
      if (int j = inst.vertical[r * inst.cols + c]) bonds.push_back({r * inst.cols + c, (r + 1) * inst.cols + c, j});
  long double z = 0.0L;
  for (std::uint64_t cfg = 0; cfg < (std::uint64_t{1} << n); ++cfg) {
    int e = 0;
    for (const auto& b : bonds) e += (((cfg >> b.a) ^ (cfg >> b.b)) & 1U) ? -b.j : b.j;
    z += std::exp(-static_cast<long double>(inst.beta) * e);
  }
  return static_cast<double>(z);
}

double partition_transfer(const RbimInstance& inst) {
  const std::size_t w = inst.cols;
  if (w > 12) throw SizeError("transfer matrix limited to 12 columns, got " + std::to_string(w));
  const std::size_t states = std::size_t{1} << w;
  auto spin = [](std::size_t cfg, std::size_t c) { return ((cfg >> c) & 1U) ? -1 : 1; };
  auto row_weight = [&](std::size_t r, std::size_t cfg) {
    int e = 0;
    for (std::size_t c = 0; c + 1 < w; ++c) e += inst.horizontal[r * (w - 1) + c] * spin(cfg, c) * spin(cfg, c + 1);
    return std::exp(-static_cast<long double>(inst.beta) * e);
  };
  std::vector<long double> v(states), next(states);
  for (std::size_t cfg = 0; cfg < states; ++cfg) v[cfg] = row_weight(0, cfg);
  for (std::size_t r = 1; r < inst.rows; ++r) {
    for (std::size_t b = 0; b < states; ++b) {
      long double acc = 0.0L;
      for (std::size_t a = 0; a < states; ++a) {
        int e = 0;
        for (std::size_t c = 0; c < w; ++c) e += inst.vertical[(r - 1) * w + c] * spin(a, c) * spin(b, c);
        acc += v[a] * std::exp(-static_cast<long double>(inst.beta) * e);
      }
      next[b] = acc * row_weight(r, b);
    }
    std::swap(v, next);
  }
  long double z = 0.0L;
  for (auto x : v) z += x;
  return static_cast<double>(z);
}

}  // namespace

double exact_partition(const RbimInstance& inst, PartitionMethod method) {
  if (inst.rows == 0 || inst.cols == 0) throw GeometryError("empty RBIM instance");
  if (inst.horizontal.size() != inst.rows * (inst.cols - 1) || inst.vertical.size() != (inst.rows - 1) * inst.cols) {
    throw DimensionError("coupling arrays do not match the grid");
  }
  switch (method) {
    case PartitionMethod::kEnumeration: return partition_enumeration(inst);
    case PartitionMethod::kTransferMatrix: return partition_transfer(inst);
    case PartitionMethod::kAuto: break;
  }
  if (inst.num_spins() <= 24) return partition_enumeration(inst);
  if (inst.cols <= 12) return partition_transfer(inst);
  throw SizeError("RBIM instance too large for exact evaluation (" + std::to_string(inst.num_spins()) + " spins, " +
                  std::to_string(inst.cols) + " columns)");
}

bool same_class(const LatticeGeometry& geom, std::uint64_t s, std::uint64_t s_prime) {
  require_small(geom);
  return star_basis(geom).reduce(s ^ s_prime) == 0;
}

std::uint64_t class_representative(const LatticeGeometry& geom, std::uint64_t s) {
  require_small(geom);
  return star_basis(geom).reduce(s);
}

std::vector<std::uint64_t> class_representatives(const LatticeGeometry& geom) {
  require_small(geom);
  const auto basis = star_basis(geom);
  std::vector<std::uint64_t> out;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << geom.num_links()); ++s)
    if (basis.reduce(s) == s) out.push_back(s);
  return out;
}

double k0_printed(const LatticeGeometry& geom, std::uint64_t s, double p_x) {
  const double beta = beta_finite(p_x);
  const double z = exact_partition(rbim_instance(geom, s, beta));
  const std::size_t n_bv = geom.num_vertices() - 2 * geom.ly();
  const std::size_t n_bl = geom.non_smooth_links().size();
  return z / (std::ldexp(1.0, static_cast<int>(n_bv)) * std::pow(std::cosh(beta), static_cast<double>(n_bl)));
}

double k0_corrected(const LatticeGeometry& geom, std::uint64_t s, double p_x) {
  const double beta = beta_finite(p_x);
  const std::size_t nv = geom.num_vertices();
  if (nv + 1 > 24) throw SizeError("ghost-spin enumeration limited to 23 vertices");
  const std::size_t ghost = nv;
  struct Edge {
    std::size_t a, b;
    int s;
  };
  std::vector<Edge> locked, free;
  for (const auto& l : geom.links()) {
    const Edge e{l.vertices[0], l.vertices.size() == 2 ? l.vertices[1] : ghost, link_sign(s, l.id)};
    (l.smooth() ? locked : free).push_back(e);
  }
  double z = 0.0;
  for (std::uint64_t cfg = 0; cfg < (std::uint64_t{1} << (nv + 1)); ++cfg) {
    auto prod = [cfg](const Edge& e) { return (((cfg >> e.a) ^ (cfg >> e.b)) & 1U) ? -1 : 1; };
    bool ok = true;
    for (const auto& e : locked)
      if (prod(e) != e.s) {
        ok = false;
        break;
      }
    if (!ok) continue;
    int sum = 0;
    for (const auto& e : free) sum += e.s * prod(e);
    z += std::exp(beta * sum);
  }
  const int expo = static_cast<int>(locked.size()) - static_cast<int>(nv) - 3;
  return std::ldexp(z, expo) / std::pow(std::cosh(beta), static_cast<double>(free.size()));
}

LoopClasses classify_loops(const LatticeGeometry& geom, std::uint64_t s, double p_x) {
  if (!(p_x >= 0.0 && p_x <= 0.5)) throw RangeError("p_x must lie in [0, 1/2], got " + std::to_string(p_x));
  const std::size_t np = geom.num_plaquettes();
  if (np > 24) throw SizeError("loop enumeration limited to 24 plaquettes");
  const std::uint64_t left = mask_of(geom.column_path(0));
  const std::uint64_t right = mask_of(geom.column_path(geom.lx() - 1));
  const std::uint64_t smooth = left ^ right;
  const std::uint64_t decohered = mask_of(geom.non_smooth_links());
  const double t = 1.0 - 2.0 * p_x;
  auto weight = [&](std::uint64_t loop) {
    return std::pow(t, std::popcount(loop & decohered)) * sign_product(s, loop);
  };
  // Loops: the span of all plaquettes but the last, which leaves S~_Z out of it.
  std::vector<std::uint64_t> gens;
  for (std::size_t p = 0; p + 1 < np; ++p) gens.push_back(mask_of(geom.boundary(p)));
  LoopClasses out;
  out.a = sign_product(s, left);
  out.b = sign_product(s, right);
  for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << gens.size()); ++sub) {
    std::uint64_t loop = 0;
    for (std::size_t i = 0; i < gens.size(); ++i)
      if ((sub >> i) & 1U) loop ^= gens[i];
    out.k0 += weight(loop);
    out.k1 += weight(loop ^ left);
    out.k2 += weight(loop ^ right);
    out.k3 += weight(loop ^ smooth);
  }
  return out;
}

MatrixElementOracle::MatrixElementOracle(const LatticeGeometry& geom) : geom_(geom) {
  require_small(geom);
  psi_ = ground_state_in_sector(build_hamiltonian(Model::kTc, geom, 0.0), Sector{}).state;
}

OracleResult MatrixElementOracle::evaluate(std::uint64_t s, std::uint64_t s_prime, double p_x) {
  auto& slot = cache_[p_x];
  if (!slot) slot = std::make_unique<DecoheredState>(decohere(psi_, geom_, p_x));
  const double norm = std::ldexp(1.0, -static_cast<int>(geom_.num_links()));
  OracleResult r;
  r.lhs = omega_matrix_element(*slot, s, s_prime).real();
  r.delta = same_class(geom_, s, s_prime);
  r.lambda = boundary_factor(s, geom_);
  r.k0 = k0_printed(geom_, s, p_x);
  r.k0_corrected = k0_corrected(geom_, s, p_x);
  r.rhs = r.delta ? r.lambda * r.k0 * norm : 0.0;
  r.rhs_corrected = r.delta ? r.lambda * r.k0_corrected * norm : 0.0;
  auto rel = [](double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale < 1e-15 ? 0.0 : std::abs(a - b) / scale;
  };
  r.residual = rel(r.lhs, r.rhs);
  r.residual_corrected = rel(r.lhs, r.rhs_corrected);
  r.match = r.residual <= 1e-9;
  r.match_corrected = r.residual_corrected <= 1e-9;
  return r;
}

namespace {

struct RealizationStats {
  std::vector<double> e, abs_m, m2, m4;  // per-bin means
  std::uint64_t seed = 0;
};

RealizationStats run_realization(const McPoint& pt, const McOptions& opt, std::uint64_t seed) {
  const std::size_t l = pt.l, n = l * l;
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<int> jr(n), jd(n), right(n), down(n), left(n), up(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = i / l, c = i % l;
    right[i] = static_cast<int>(r * l + (c + 1) % l);
    left[i] = static_cast<int>(r * l + (c + l - 1) % l);
    down[i] = static_cast<int>(((r + 1) % l) * l + c);
    up[i] = static_cast<int>(((r + l - 1) % l) * l + c);
  }
  for (std::size_t i = 0; i < n; ++i) jr[i] = uniform() < pt.p ? -1 : 1;
  for (std::size_t i = 0; i < n; ++i) jd[i] = uniform() < pt.p ? -1 : 1;

  // Acceptance thresholds on 53-bit uniforms for local field sigma*h = 2, 4.
  std::uint64_t thr[5] = {0, 0, 0, 0, 0};
  for (int k = 1; k <= 2; ++k) {
    const double a = std::isinf(pt.beta) ? 0.0 : std::exp(-2.0 * pt.beta * 2 * k);
    thr[2 + k] = static_cast<std::uint64_t>(std::ldexp(a, 53));
  }
  std::vector<int> spin(n, 1);
  long energy = 0, mag = static_cast<long>(n);
  for (std::size_t i = 0; i < n; ++i) energy -= jr[i] + jd[i];

  auto sweep = [&] {
    for (std::size_t step = 0; step < n; ++step) {
      const std::size_t i = static_cast<std::size_t>(((rng() >> 32) * n) >> 32);
      const int h = jr[i] * spin[right[i]] + jr[left[i]] * spin[left[i]] + jd[i] * spin[down[i]] + jd[up[i]] * spin[up[i]];
      const int k = spin[i] * h;  // energy change is 2k
      if (k <= 0 || (rng() >> 11) < thr[2 + k / 2]) {
        energy += 2 * k;
        mag -= 2 * spin[i];
        spin[i] = -spin[i];
      }
    }
  };
  for (std::size_t s = 0; s < opt.thermalization; ++s) sweep();

  RealizationStats st;
  st.seed = seed;
  const std::size_t per_bin = opt.sweeps / opt.bins;
  const double dn = static_cast<double>(n);
  for (std::size_t b = 0; b < opt.bins; ++b) {
    double se = 0, sa = 0, s2 = 0, s4 = 0;
    for (std::size_t s = 0; s < per_bin; ++s) {
      sweep();
      const double m = static_cast<double>(mag) / dn;
      se += static_cast<double>(energy) / dn;
      sa += std::abs(m);
      s2 += m * m;
      s4 += m * m * m * m;
    }
    const double k = static_cast<double>(per_bin);
    st.e.push_back(se / k);
    st.abs_m.push_back(sa / k);
    st.m2.push_back(s2 / k);
    st.m4.push_back(s4 / k);
  }
  return st;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double binder_of(double m2, double m4) { return m2 > 0.0 ? 1.0 - m4 / (3.0 * m2 * m2) : 0.0; }

McEstimate reduce_point(const McPoint& pt, const std::vector<RealizationStats>& reals) {
  McEstimate est;
  est.point = pt;
  est.realizations = reals.size();
  est.first_seed = reals.front().seed;
  // Jackknife units: realizations, or time bins for a single realization.
  std::vector<double> ue, ua, u2, u4;
  if (reals.size() >= 2) {
    for (const auto& r : reals) {
      ue.push_back(mean(r.e));
      ua.push_back(mean(r.abs_m));
      u2.push_back(mean(r.m2));
      u4.push_back(mean(r.m4));
    }
  } else {
    ue = reals[0].e;
    ua = reals[0].abs_m;
    u2 = reals[0].m2;
    u4 = reals[0].m4;
  }
  const std::size_t k = ue.size();
  est.energy = mean(ue);
  est.abs_m = mean(ua);
  est.m2 = mean(u2);
  est.m4 = mean(u4);
  est.binder = binder_of(est.m2, est.m4);
  if (k >= 2) {
    const double dk = static_cast<double>(k);
    double ve = 0, va = 0, vb = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const double je = (est.energy * dk - ue[i]) / (dk - 1);
      const double ja = (est.abs_m * dk - ua[i]) / (dk - 1);
      const double jb = binder_of((est.m2 * dk - u2[i]) / (dk - 1), (est.m4 * dk - u4[i]) / (dk - 1));
      ve += (je - est.energy) * (je - est.energy);
      va += (ja - est.abs_m) * (ja - est.abs_m);
      vb += (jb - est.binder) * (jb - est.binder);
    }
    const double f = (dk - 1) / dk;
    est.energy_err = std::sqrt(f * ve);
    est.abs_m_err = std::sqrt(f * va);
    est.binder_err = std::sqrt(f * vb);
  }

  // Drift check: realization-averaged energy in the first and second half of
  // the measurement bins must agree within 4 standard errors.
  const std::size_t nb = reals.front().e.size();
  std::vector<double> series(nb, 0.0);
  for (const auto& r : reals)
    for (std::size_t b = 0; b < nb; ++b) series[b] += r.e[b] / static_cast<double>(reals.size());
  const std::size_t half = nb / 2;
  if (half >= 2) {
    auto stats = [&](std::size_t from, std::size_t to) {
      double m = 0, v = 0;
      for (std::size_t b = from; b < to; ++b) m += series[b];
      m /= static_cast<double>(to - from);
      for (std::size_t b = from; b < to; ++b) v += (series[b] - m) * (series[b] - m);
      v /= static_cast<double>((to - from) * (to - from - 1));
      return std::pair{m, v};
    };
    const auto [m1, v1] = stats(0, half);
    const auto [m2, v2] = stats(nb - half, nb);
    est.thermalized = std::abs(m1 - m2) <= 4.0 * std::sqrt(v1 + v2) + 1e-12;
  }
  return est;
}

void validate(const McPoint& pt, const McOptions& opt) {
  if (pt.l < 2 || pt.l > 64) throw RangeError("L must lie in [2, 64], got " + std::to_string(pt.l));
  if (!(pt.p >= 0.0 && pt.p <= 1.0)) throw RangeError("disorder probability must lie in [0, 1]");
  if (!(pt.beta >= 0.0)) throw RangeError("beta must be nonnegative");
  if (opt.realizations == 0) throw RangeError("at least one disorder realization is required");
  if (opt.bins < 2 || opt.sweeps < opt.bins) throw RangeError("need at least 2 bins and one sweep per bin");
}

}  // namespace

std::vector<McEstimate> mc_scan(const std::vector<McPoint>& points, const McOptions& options) {
  for (const auto& pt : points) validate(pt, options);
  const std::size_t r = options.realizations;
  auto stats = parallel_map(points.size() * r, options.workers, [&](std::size_t task) {
    return run_realization(points[task / r], options, seed_derive(options.seed, task));
  });
  std::vector<McEstimate> out;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const std::vector<RealizationStats> mine(stats.begin() + static_cast<std::ptrdiff_t>(i * r),
                                             stats.begin() + static_cast<std::ptrdiff_t>((i + 1) * r));
    out.push_back(reduce_point(points[i], mine));
  }
  return out;
}

McEstimate mc_estimate(const McPoint& point, const McOptions& options) { return mc_scan({point}, options).front(); }

std::optional<double> crossing(const std::vector<double>& x, const std::vector<double>& y1,
                               const std::vector<double>& y2) {
  if (x.size() != y1.size() || x.size() != y2.size()) throw DimensionError("crossing: series lengths differ");
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double d0 = y1[i] - y2[i], d1 = y1[i + 1] - y2[i + 1];
    if (d0 == 0.0) return x[i];
    if ((d0 < 0) != (d1 < 0)) return x[i] + (x[i + 1] - x[i]) * d0 / (d0 - d1);
  }
  if (!x.empty() && y1.back() == y2.back()) return x.back();
  return std::nullopt;
}

}  // namespace ghsc
