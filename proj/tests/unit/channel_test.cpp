#include "ghsc/channel.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dense.hpp"
#include "ghsc/code.hpp"
#include "ghsc/errors.hpp"

namespace ghsc {
namespace {

StateVector tc_ground(const LatticeGeometry& g, double j) {
  return ground_state_in_sector(build_hamiltonian(Model::kTc, g, j), Sector{}).state;
}

StateVector random_state(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  Amplitudes v(Eigen::Index{1} << n);
  for (auto& a : v) a = {nd(rng), nd(rng)};
  return StateVector(n, v.normalized());
}

// Channel applied link by link as (1-p) rho + p X rho X.
Eigen::MatrixXcd channel_by_links(const LatticeGeometry& g, const StateVector& psi, double p) {
  const std::size_t n = g.num_links();
  Eigen::MatrixXcd rho = psi.amplitudes() * psi.amplitudes().adjoint();
  for (auto l : g.non_smooth_links()) {
    const auto x = testing::dense(PauliOperator::single(n, l, 'X'));
    rho = ((1 - p) * rho + p * x * rho * x).eval();
  }
  return rho;
}

Eigen::VectorXd sorted_desc(Eigen::VectorXd v) {
  std::sort(v.begin(), v.end(), std::greater<>());
  return v;
}

// Compares the leading entries and requires the rest to vanish.
void expect_same_spectrum(const Eigen::VectorXd& a, const Eigen::VectorXd& b, double tol) {
  const Eigen::Index n = std::max(a.size(), b.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = i < a.size() ? a[i] : 0.0, y = i < b.size() ? b[i] : 0.0;
    EXPECT_NEAR(x, y, tol) << "eigenvalue " << i;
  }
}

struct Case {
  std::size_t lx, ly;
  double j, p;
};

class GramSpectrum : public ::testing::TestWithParam<Case> {};

TEST_P(GramSpectrum, MatchesExplicitDensityMatrix) {
  const auto c = GetParam();
  const auto g = build_geometry(c.lx, c.ly);
  const auto psi = tc_ground(g, c.j);
  const auto d = decohere(psi, g, c.p);
  const auto rho = channel_by_links(g, psi, c.p);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  expect_same_spectrum(d.eigenvalues(), sorted_desc(es.eigenvalues()), 1e-10);
  EXPECT_LT((density_matrix(d) - rho).norm(), 1e-12);

  double wsum = 0.0;
  for (double w : d.branch_weights()) wsum += w;
  EXPECT_NEAR(wsum, 1.0, 1e-12);
  EXPECT_NEAR(d.eigenvalues().sum(), 1.0, 1e-10);
  EXPECT_GE(d.eigenvalues().minCoeff(), -1e-12);
  for (Eigen::Index i = 1; i < d.eigenvalues().size(); ++i) EXPECT_LE(d.eigenvalues()[i], d.eigenvalues()[i - 1]);
}

INSTANTIATE_TEST_SUITE_P(SmallLattices, GramSpectrum,
                         ::testing::Values(Case{2, 1, 0.0, 0.1}, Case{2, 1, 0.4, 0.3}, Case{2, 1, 1.1, 0.5},
                                           Case{2, 2, 0.0, 0.05}, Case{2, 2, 0.3, 0.2}, Case{2, 2, 0.9, 0.45},
                                           Case{2, 2, 0.5, 0.5}));

TEST(Decohere, RandomStatesMatchExplicitChannel) {
  std::mt19937_64 rng(5);
  const auto g = build_geometry(2, 2);
  for (double p : {0.07, 0.25, 0.5}) {
    const auto psi = random_state(g.num_links(), rng);
    const auto d = decohere(psi, g, p);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(channel_by_links(g, psi, p), Eigen::EigenvaluesOnly);
    expect_same_spectrum(d.eigenvalues(), sorted_desc(es.eigenvalues()), 1e-10);
  }
}

TEST(Decohere, ThirteenQubitSpectrumMatchesBranchSvd) {
  const auto g = build_geometry(3, 2);
  ASSERT_EQ(g.num_links(), 13u);
  const auto psi = tc_ground(g, 0.3);
  const auto d = decohere(psi, g, 0.15);
  EXPECT_EQ(d.decohered_links().size(), 7u);
  EXPECT_EQ(d.num_branches(), 128u);
  // rho = A A^dagger with columns sqrt(w_S) X_S psi; its spectrum is sigma(A)^2.
  const auto dim = static_cast<Eigen::Index>(psi.dimension());
  Eigen::MatrixXcd a(dim, static_cast<Eigen::Index>(d.num_branches()));
  for (std::size_t s = 0; s < d.num_branches(); ++s) {
    for (Eigen::Index b = 0; b < dim; ++b) {
      a(b, static_cast<Eigen::Index>(s)) =
          std::sqrt(d.branch_weights()[s]) * psi[static_cast<std::size_t>(b) ^ d.branch_masks()[s]];
    }
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
  const Eigen::VectorXd sv2 = svd.singularValues().array().square();
  expect_same_spectrum(d.eigenvalues(), sv2, 1e-10);
  EXPECT_LE(d.rank(), 128u);
}

TEST(Decohere, IdentityChannelAtZeroNoise) {
  const auto g = build_geometry(3, 2);
  const auto d = decohere(tc_ground(g, 0.5), g, 0.0);
  EXPECT_EQ(d.num_branches(), 1u);
  ASSERT_EQ(d.eigenvalues().size(), 1);
  EXPECT_NEAR(d.eigenvalues()[0], 1.0, 1e-12);
  EXPECT_NEAR(entropy(d), 0.0, 1e-12);
  EXPECT_NEAR(purity(d), 1.0, 1e-12);
}

TEST(Decohere, GaugedOutFixedPointIsUniform) {
  const auto g = build_geometry(3, 2);
  const auto d = decohere(tc_ground(g, 0.0), g, 0.5);
  const std::size_t r = d.rank(1e-10);
  ASSERT_GT(r, 0u);
  for (std::size_t i = 0; i < r; ++i) EXPECT_NEAR(d.eigenvalues()[static_cast<Eigen::Index>(i)], 1.0 / double(r), 1e-10);
  EXPECT_NEAR(entropy(d), std::log(double(r)), 1e-9);
  EXPECT_NEAR(entropy(d, std::nullopt, LogBase::kTwo), std::log2(double(r)), 1e-9);
  EXPECT_NEAR(purity(d), 1.0 / double(r), 1e-10);
  // 6 plaquettes gauged out, S~_Z kept: 2^(6-1) classes.
  EXPECT_EQ(r, 32u);
}

TEST(Decohere, RejectsBadInput) {
  const auto g = build_geometry(2, 1);
  const auto psi = tc_ground(g, 0.2);
  EXPECT_THROW(decohere(psi, g, -0.01), RangeError);
  EXPECT_THROW(decohere(psi, g, 0.51), RangeError);
  EXPECT_THROW(decohere(psi, g, std::nan("")), RangeError);
  EXPECT_THROW(decohere(StateVector(4), g, 0.1), DimensionError);
  ChannelOptions tight;
  tight.kraus_cap = 0;
  EXPECT_THROW(decohere(psi, g, 0.1, tight), SizeError);
}

TEST(Entropy, MonotoneInNoiseAndTopKIsNoOp) {
  const auto g = build_geometry(3, 2);
  const auto psi = tc_ground(g, 0.3);
  double prev_s = -1.0, prev_p = 2.0;
  for (int k = 0; k <= 20; ++k) {
    const auto d = decohere(psi, g, 0.025 * k);
    const double s = entropy(d), pr = purity(d);
    EXPECT_GE(s, prev_s - 1e-12) << "p=" << 0.025 * k;
    EXPECT_LE(pr, prev_p + 1e-12) << "p=" << 0.025 * k;
    EXPECT_GT(pr, 0.0);
    EXPECT_LE(pr, 1.0 + 1e-12);
    EXPECT_DOUBLE_EQ(entropy(d, 300), s);
    prev_s = s;
    prev_p = pr;
  }
}

TEST(Entropy, TopKTruncates) {
  const auto g = build_geometry(2, 2);
  const auto d = decohere(tc_ground(g, 0.2), g, 0.3);
  const auto& ev = d.eigenvalues();
  EXPECT_NEAR(entropy(d, 1), -ev[0] * std::log(ev[0]), 1e-15);
  EXPECT_NEAR(entropy(d, 0), 0.0, 0.0);
}

TEST(ChannelExpectation, ClosedFormMatchesBranchesAndDenseTrace) {
  std::mt19937_64 rng(9);
  const auto g = build_geometry(2, 2);
  const std::size_t n = g.num_links();
  const auto psi = tc_ground(g, 0.6);
  for (double p : {0.0, 0.13, 0.5}) {
    const auto d = decohere(psi, g, p);
    const auto rho = channel_by_links(g, psi, p);
    for (int t = 0; t < 40; ++t) {
      const auto op = testing::random_pauli(n, rng);
      const std::complex<double> want = (rho * testing::dense(op)).trace();
      EXPECT_LT(std::abs(channel_expectation(d, op) - want), 1e-12) << op.str();
      EXPECT_LT(std::abs(channel_expectation_branchwise(d, op) - want), 1e-12) << op.str();
    }
  }
}

TEST(ChannelExpectation, LogicalZSurvivesEveryNoiseLevel) {
  const auto g = build_geometry(3, 2);
  const auto lz = logical_z_op(g);
  for (double j : {0.0, 0.5, 1.0}) {
    const auto psi = tc_ground(g, j);
    for (double p : {0.0, 0.1, 0.25, 0.5}) {
      EXPECT_NEAR(channel_expectation(decohere(psi, g, p), lz).real(), 1.0, 1e-10);
    }
  }
}

TEST(Moments, StabilizerAtZeroNoise) {
  const auto g = build_geometry(3, 2);
  const auto d = decohere(tc_ground(g, 0.0), g, 0.0);
  const auto m = observable_moments(d, PauliSum::from_operator(plaquette_z(g, 2)));
  EXPECT_NEAR(m.mean, 1.0, 1e-10);
  EXPECT_NEAR(m.variance, 0.0, 1e-10);
}

TEST(Moments, MatchDenseTraces) {
  const auto g = build_geometry(2, 2);
  const auto psi = tc_ground(g, 0.4);
  PauliSum op(g.num_links());
  op.add(0.5, plaquette_z(g, 1));
  op.add(-0.3, link_x(g, 2));
  op.add(0.2, vertex_star_x(g, 0));
  const auto od = testing::dense(op);
  for (double p : {0.05, 0.2, 0.5}) {
    const auto rho = channel_by_links(g, psi, p);
    const double mean = (rho * od).trace().real();
    const double var = (rho * od * od).trace().real() - mean * mean;
    const auto m = observable_moments(decohere(psi, g, p), op);
    EXPECT_NEAR(m.mean, mean, 1e-12);
    EXPECT_NEAR(m.variance, var, 1e-12);
    const double spread = 2 * (0.5 + 0.3 + 0.2);
    EXPECT_GE(m.variance, 0.0);
    EXPECT_LE(m.variance, spread * spread);
  }
}

TEST(Moments, RejectsNonHermitian) {
  const auto g = build_geometry(2, 1);
  const auto d = decohere(tc_ground(g, 0.1), g, 0.1);
  PauliSum op(g.num_links());
  op.add({0.0, 1.0}, link_x(g, 0));
  EXPECT_THROW(observable_moments(d, op), HermiticityError);
}

TEST(OmegaBasis, MatrixElementsMatchDenseRho) {
  std::mt19937_64 rng(3);
  const auto g = build_geometry(2, 2);
  const auto psi = tc_ground(g, 0.0);
  const auto d = decohere(psi, g, 0.1);
  const auto rho = channel_by_links(g, psi, 0.1);
  // |Omega_s> is the computational basis state s.
  for (int t = 0; t < 100; ++t) {
    const std::uint64_t s = rng() % 256, sp = rng() % 256;
    EXPECT_LT(std::abs(omega_matrix_element(d, s, sp) - rho(Eigen::Index(s), Eigen::Index(sp))), 1e-14);
  }
}

TEST(GaugePlaquettes, DefaultPairIsCentral) {
  EXPECT_EQ(default_gauge_plaquettes(build_geometry(3, 2)), (std::pair<std::size_t, std::size_t>{2, 3}));
  const auto g = build_geometry(4, 3);
  const auto [p1, p2] = default_gauge_plaquettes(g);
  EXPECT_EQ(g.boundary(p1).size(), 4u);
  EXPECT_EQ(g.boundary(p2).size(), 4u);
  EXPECT_THROW(default_gauge_plaquettes(build_geometry(2, 2)), GeometryError);
}

TEST(Scan, SinglePointEqualsDirectCalls) {
  ScanConfig cfg;
  cfg.geometry = build_geometry(3, 2);
  cfg.j_grid = {0.5};
  cfg.p_grid = {0.15};
  const auto [p1, p2] = default_gauge_plaquettes(cfg.geometry);
  cfg.observables = {{"O_G", gauge_observable(cfg.geometry, p1, p2)}};
  const auto rows = scan(cfg);
  ASSERT_EQ(rows.size(), 1u);
  ASSERT_TRUE(rows[0].ok) << rows[0].error;
  const auto gs = ground_state_in_sector(build_hamiltonian(Model::kTc, cfg.geometry, 0.5), Sector{});
  const auto d = decohere(gs.state, cfg.geometry, 0.15);
  EXPECT_EQ(rows[0].entropy, entropy(d));
  EXPECT_EQ(rows[0].purity, purity(d));
  EXPECT_EQ(rows[0].moments[0].variance, observable_moments(d, cfg.observables[0].op).variance);
  EXPECT_EQ(rows[0].ground_energy, gs.energy);
  EXPECT_EQ(rows[0].degeneracy, gs.degeneracy);
}

TEST(Scan, DeterministicAcrossWorkersAndRecordsErrors) {
  ScanConfig cfg;
  cfg.geometry = build_geometry(2, 2);
  cfg.j_grid = {0.0, 0.7};
  cfg.p_grid = {0.0, 0.2, 0.6};
  cfg.observables = {{"B1", PauliSum::from_operator(plaquette_z(cfg.geometry, 1))}};
  cfg.workers = 1;
  const auto a = scan(cfg);
  cfg.workers = 3;
  const auto b = scan(cfg);
  ASSERT_EQ(a.size(), 6u);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].ok, b[i].ok);
    EXPECT_EQ(a[i].entropy, b[i].entropy);
    EXPECT_EQ(a[i].purity, b[i].purity);
    EXPECT_EQ(a[i].lz_expectation, b[i].lz_expectation);
  }
  EXPECT_FALSE(a[2].ok);
  EXPECT_NE(a[2].error.find("p_x"), std::string::npos);
  EXPECT_TRUE(a[3].ok);
  EXPECT_DOUBLE_EQ(a[3].j, 0.7);
}

}  // namespace
}  // namespace ghsc
