#include "ghsc/stability.hpp"

#include <gtest/gtest.h>

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>

#include "dense.hpp"
#include "ghsc/code.hpp"
#include "ghsc/errors.hpp"

namespace ghsc {
namespace {

const std::complex<double> kI{0.0, 1.0};

StateVector tc_ground(const LatticeGeometry& g, double j) {
  return ground_state_in_sector(build_hamiltonian(Model::kTc, g, j), Sector{}).state;
}

Eigen::MatrixXcd channel_by_links(const LatticeGeometry& g, const StateVector& psi, double p) {
  const std::size_t n = g.num_links();
  Eigen::MatrixXcd rho = psi.amplitudes() * psi.amplitudes().adjoint();
  for (auto l : g.non_smooth_links()) {
    const auto x = testing::dense(PauliOperator::single(n, l, 'X'));
    rho = ((1 - p) * rho + p * x * rho * x).eval();
  }
  return rho;
}

// exp(-i theta H) for Hermitian H by eigendecomposition.
Eigen::MatrixXcd expm_herm(const Eigen::MatrixXcd& h, double theta) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXcd ph = (-kI * theta * es.eigenvalues().cast<std::complex<double>>()).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

TEST(ExactF, ZeroStepAndEigenstate) {
  const auto g = build_geometry(3, 2);
  const auto spec = default_coupling(g);
  const auto d = decohere(tc_ground(g, 0.4), g, 0.2);
  EXPECT_EQ(exact_F(d, spec.gauge_op, 0.0), std::complex<double>(0.0));
  // J = 0, no noise: both plaquettes are +1, so O_G = 1 on the state.
  const auto pure = decohere(tc_ground(g, 0.0), g, 0.0);
  for (double dt : {0.01, 0.3}) {
    EXPECT_LT(std::abs(exact_F(pure, spec.gauge_op, dt) - (std::exp(-2.0 * kI * dt) - 1.0)), 1e-12);
    const auto m = observable_moments(pure, spec.gauge_op);
    EXPECT_NEAR(m.variance, 0.0, 1e-12);
    EXPECT_LT(std::abs(cumulant_F(m.mean, m.variance, dt) - (std::exp(-2.0 * kI * dt) - 1.0)), 1e-12);
  }
}

TEST(ExactF, MatchesDenseExponential) {
  const auto g = build_geometry(2, 2);
  const auto psi = tc_ground(g, 0.6);
  // Commuting (single plaquette plus star) and non-commuting sums.
  PauliSum commuting(g.num_links());
  commuting.add(0.7, plaquette_z(g, 1));
  commuting.add(-0.4, vertex_star_x(g, 0));
  PauliSum clashing(g.num_links());
  clashing.add(0.5, plaquette_z(g, 1));
  clashing.add(0.3, link_x(g, 2));
  clashing.add(0.2, link_z(g, 4));
  ASSERT_TRUE(commuting.terms_commute());
  ASSERT_FALSE(clashing.terms_commute());
  for (double p : {0.05, 0.3}) {
    const auto d = decohere(psi, g, p);
    const auto rho = channel_by_links(g, psi, p);
    for (const auto* op : {&commuting, &clashing}) {
      for (double dt : {0.02, 0.3, -0.7}) {
        const std::complex<double> want = (expm_herm(testing::dense(*op), 2.0 * dt) * rho).trace() - 1.0;
        EXPECT_LT(std::abs(exact_F(d, *op, dt) - want), 1e-12) << op->str() << " dt=" << dt;
      }
    }
  }
}

TEST(ExactF, HermiticityAndBound) {
  const auto g = build_geometry(3, 2);
  const auto spec = default_coupling(g);
  const auto d = decohere(tc_ground(g, 0.5), g, 0.15);
  for (double dt : {0.001, 0.05, 0.4, 2.0}) {
    const auto f = exact_F(d, spec.gauge_op, dt);
    EXPECT_LT(std::abs(exact_F(d, spec.gauge_op, -dt) - std::conj(f)), 1e-14);
    EXPECT_LE(std::abs(f), 2.0);
  }
  EXPECT_THROW(exact_F(d, spec.gauge_op, std::nan("")), RangeError);
  PauliSum bad(g.num_links());
  bad.add(kI, plaquette_z(g, 2));
  EXPECT_THROW(exact_F(d, bad, 0.1), HermiticityError);
}

TEST(Cumulant, ClosedForms) {
  EXPECT_LT(std::abs(cumulant_F(0.3, 0.0, 0.1) - (std::exp(-0.06 * kI) - 1.0)), 1e-15);
  EXPECT_LT(std::abs(cumulant_F(0.0, 0.5, 0.1) - std::complex<double>(-2 * 0.01 * 0.5)), 1e-15);
}

TEST(Cumulant, ThirdOrderAccuracy) {
  const auto g = build_geometry(3, 2);
  const auto spec = default_coupling(g);
  const auto d = decohere(tc_ground(g, 0.3), g, 0.15);
  const auto m = observable_moments(d, spec.gauge_op);
  std::vector<double> dts, errs;
  for (double dt = 1e-3; dt <= 0.1001; dt *= std::sqrt(10.0)) {
    dts.push_back(dt);
    errs.push_back(std::abs(exact_F(d, spec.gauge_op, dt) - cumulant_F(m.mean, m.variance, dt)));
  }
  EXPECT_NEAR(loglog_slope(dts, errs), 3.0, 0.2);
  // C dt^3 with C from the smallest step bounds every point.
  const double c = errs.front() / std::pow(dts.front(), 3);
  for (std::size_t i = 0; i < dts.size(); ++i) EXPECT_LE(errs[i], 2 * c * std::pow(dts[i], 3));
}

TEST(LogicalDeviation, MatchesTracedEvolution) {
  // Logical qubit (qubit 0) times the (2,2) toric code; V = X_L (x) O_G.
  const auto g = build_geometry(2, 2);
  const std::size_t n = g.num_links();
  const auto psi = tc_ground(g, 0.5);
  const double p = 0.2, dt = 0.15;
  PauliSum o(n);
  o.add(0.5, plaquette_z(g, 1));
  o.add(0.5, plaquette_z(g, 0));
  const auto rho_g = channel_by_links(g, psi, p);
  const Eigen::MatrixXcd og = testing::dense(o);
  const Eigen::Vector2cd psi_l(1.0, 0.0);  // L_z = +1
  Eigen::Matrix2cd xl;
  xl << 0, 1, 1, 0;
  const Eigen::MatrixXcd v = Eigen::kroneckerProduct(og, xl);
  const Eigen::MatrixXcd rho = Eigen::kroneckerProduct(rho_g, Eigen::Matrix2cd(psi_l * psi_l.adjoint()));
  const Eigen::MatrixXcd u = expm_herm(v, dt);
  const Eigen::MatrixXcd evolved = u * rho * u.adjoint();
  Eigen::Matrix2cd traced = Eigen::Matrix2cd::Zero();
  const Eigen::Index dg = rho_g.rows();
  for (Eigen::Index k = 0; k < dg; ++k) traced += evolved.block(2 * k, 2 * k, 2, 2);
  // Change of basis to the X_L eigenbasis (+1 first).
  Eigen::Matrix2cd h;
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  const Eigen::Matrix2cd delta = h.adjoint() * (traced - psi_l * psi_l.adjoint()) * h;
  const auto f = exact_F(decohere(psi, g, p), o, dt);
  const Eigen::Matrix2cd want = logical_deviation(h.adjoint() * psi_l, f);
  EXPECT_LT((delta - want).norm(), 1e-12);
  EXPECT_EQ(want(0, 0), std::complex<double>(0.0));
  EXPECT_EQ(want(1, 1), std::complex<double>(0.0));
  EXPECT_LT(std::abs(want(1, 0) - std::conj(want(0, 1))), 1e-15);
}

TEST(Coupling, Requirements) {
  const auto g = build_geometry(3, 2);
  auto spec = default_coupling(g);
  EXPECT_NO_THROW(validate_coupling(spec, g));
  auto wrong_logical = spec;
  wrong_logical.logical_op = logical_z_op(g);
  EXPECT_THROW(validate_coupling(wrong_logical, g), Error);
  auto blind = spec;
  blind.gauge_op = PauliSum::from_operator(vertex_star_x(g, 0));
  EXPECT_THROW(validate_coupling(blind, g), Error);
  // A smooth-link Z string is invisible to the channel.
  PauliSum smooth(g.num_links());
  smooth.add(1.0, link_z(g, g.column_path(0)[1]));
  blind.gauge_op = smooth;
  EXPECT_THROW(validate_coupling(blind, g), Error);
}

TEST(StabilityScan, ZeroNoiseRowsAndGaugedOutPoint) {
  StabilityConfig cfg;
  cfg.geometry = build_geometry(3, 2);
  cfg.j_grid = {0.0, 0.5};
  cfg.p_grid = {0.0, 0.5};
  cfg.dts = {0.01, 0.05};
  cfg.coupling = default_coupling(cfg.geometry);
  const auto rows = stability_scan(cfg);
  ASSERT_EQ(rows.size(), 8u);
  for (const auto& r : rows) ASSERT_TRUE(r.ok) << r.error;
  // J = 0.5, p = 0 against the pure-state variance.
  const auto psi = tc_ground(cfg.geometry, 0.5);
  const SparsePauliMatrix o(cfg.coupling.gauge_op);
  const Amplitudes oa = o * psi.amplitudes();
  const double mean = psi.amplitudes().dot(oa).real();
  const double var = oa.squaredNorm() - mean * mean;
  EXPECT_DOUBLE_EQ(rows[4].j, 0.5);
  EXPECT_DOUBLE_EQ(rows[4].p_x, 0.0);
  EXPECT_NEAR(rows[4].variance, var, 1e-10);
  // J = 0, p = 1/2: plaquettes gauged out.
  const auto& r = rows[3];
  EXPECT_DOUBLE_EQ(r.p_x, 0.5);
  EXPECT_NEAR(r.mean, 0.0, 1e-12);
  EXPECT_NEAR(r.exact_f.real(), -2 * r.dt * r.dt * r.variance, 1e-5);
  for (const auto& row : rows) EXPECT_LE(std::abs(row.exact_f), 2.0);
}

TEST(Slope, RecoversPowerLaw) {
  std::vector<double> x{1e-3, 1e-2, 1e-1}, y;
  for (double v : x) y.push_back(7 * v * v * v);
  EXPECT_NEAR(loglog_slope(x, y), 3.0, 1e-12);
  EXPECT_THROW(loglog_slope({1.0}, {1.0}), DimensionError);
}

}  // namespace
}  // namespace ghsc
