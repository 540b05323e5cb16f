#include "ghsc/stability.hpp"

#include <cmath>

#include "ghsc/code.hpp"
#include "ghsc/errors.hpp"
#include "ghsc/parallel.hpp"

namespace ghsc {

namespace {

const std::complex<double> kI{0.0, 1.0};

// exp(-i theta O) |v> by a scaled Taylor series.
Amplitudes propagate(const SparsePauliMatrix& o, double theta, Amplitudes v) {
  const int steps = std::max(1, static_cast<int>(std::ceil(std::abs(theta) * o.norm_bound())));
  const double h = theta / steps;
  for (int s = 0; s < steps; ++s) {
    Amplitudes term = v, acc = v;
    for (int k = 1; k < 60; ++k) {
      term = (-kI * h / static_cast<double>(k)) * (o * term);
      acc += term;
      if (term.norm() < 1e-18 * acc.norm()) break;
    }
    v = std::move(acc);
  }
  return v;
}

}  // namespace

CouplingSpec default_coupling(const LatticeGeometry& geom, double dt) {
  const auto [p1, p2] = default_gauge_plaquettes(geom);
  return {logical_x_op(geom), gauge_observable(geom, p1, p2), dt};
}

void validate_coupling(const CouplingSpec& spec, const LatticeGeometry& geom) {
  const std::size_t n = geom.num_links();
  if (spec.logical_op.num_qubits() != n || spec.gauge_op.num_qubits() != n) {
    throw DimensionError("coupling operators must act on the " + std::to_string(n) + " link qubits");
  }
  if (commutes(spec.logical_op, logical_z_op(geom))) {
    throw Error("logical operator " + spec.logical_op.str() + " commutes with L_z; the L_z = +1 state is diagonal in it");
  }
  if (!spec.gauge_op.is_hermitian()) throw HermiticityError("gauge operator is not Hermitian");
  const auto links = geom.non_smooth_links();
  for (const auto& t : spec.gauge_op.terms()) {
    bool hit = false;
    for (auto l : links) hit = hit || t.op.z(l);
    if (!hit) throw Error("gauge term " + t.op.str() + " commutes with every decohered sigma^x");
  }
}

std::complex<double> exact_F(const DecoheredState& d, const PauliSum& gauge_op, double dt) {
  if (!std::isfinite(dt)) throw RangeError("dt must be finite");
  if (!gauge_op.is_hermitian()) throw HermiticityError("gauge operator is not Hermitian");
  const std::size_t n = gauge_op.num_qubits();
  if (n != d.base_state().num_qubits()) throw DimensionError("gauge operator and state sizes differ");
  if (dt == 0.0) return {0.0, 0.0};
  if (gauge_op.terms_commute()) {
    PauliSum u = PauliSum::from_operator(PauliOperator::identity(n));
    for (const auto& t : gauge_op.terms()) {
      const double theta = 2.0 * dt * t.coeff.real();
      PauliSum factor(n);
      factor.add(std::cos(theta), PauliOperator::identity(n));
      factor.add(-kI * std::sin(theta), t.op);
      u = (u * factor).simplified(0.0);
    }
    return channel_expectation(d, u) - 1.0;
  }
  const SparsePauliMatrix o(gauge_op);
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < d.num_branches(); ++i) {
    const auto xs = PauliOperator(BitVector(n, d.branch_masks()[i]), BitVector(n));
    const Amplitudes phi = apply_pauli(d.base_state(), xs).amplitudes();
    acc += d.branch_weights()[i] * phi.dot(propagate(o, 2.0 * dt, phi));
  }
  return acc - 1.0;
}

std::complex<double> cumulant_F(double mean, double variance, double dt) {
  return std::exp(-2.0 * kI * dt * mean) * (1.0 - 2.0 * dt * dt * variance) - 1.0;
}

Eigen::Matrix2cd logical_deviation(const Eigen::Vector2cd& psi_l, std::complex<double> f) {
  Eigen::Matrix2cd out = Eigen::Matrix2cd::Zero();
  out(0, 1) = psi_l[0] * std::conj(psi_l[1]) * f;
  out(1, 0) = std::conj(out(0, 1));
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DimensionError("loglog_slope needs two equal-length series");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) throw RangeError("loglog_slope needs positive data");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double k = static_cast<double>(x.size());
  return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

std::vector<StabilityRow> stability_scan(const StabilityConfig& config) {
  const auto& g = config.geometry;
  validate_coupling(config.coupling, g);
  const auto grounds = tc_ground_states(g, config.j_grid, config.sector, config.lanczos, config.workers);
  const std::size_t np = config.p_grid.size();
  const auto blocks = parallel_map(config.j_grid.size() * np, config.workers, [&](std::size_t idx) {
    const std::size_t ji = idx / np;
    std::vector<StabilityRow> rows;
    for (double dt : config.dts) {
      StabilityRow r;
      r.j = config.j_grid[ji];
      r.p_x = config.p_grid[idx % np];
      r.dt = dt;
      rows.push_back(r);
    }
    auto fail = [&](const std::string& what) {
      for (auto& r : rows) {
        r.ok = false;
        r.error = what;
      }
    };
    if (!grounds[ji].state) {
      fail(grounds[ji].error);
      return rows;
    }
    try {
      const auto d = decohere(grounds[ji].state->state, g, config.p_grid[idx % np], config.channel);
      const auto m = observable_moments(d, config.coupling.gauge_op);
      for (auto& r : rows) {
        r.mean = m.mean;
        r.variance = m.variance;
        r.exact_f = exact_F(d, config.coupling.gauge_op, r.dt);
        r.cumulant_f = cumulant_F(m.mean, m.variance, r.dt);
      }
    } catch (const Error& e) {
      fail(e.what());
    }
    return rows;
  });
  std::vector<StabilityRow> out;
  for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace ghsc
