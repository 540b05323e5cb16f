#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <vector>

#include "ghsc/channel.hpp"

namespace ghsc {

// V_LG = L_0 (x) O_G with O_G acting on the toric-code qubits.
struct CouplingSpec {
  PauliOperator logical_op;
  PauliSum gauge_op;
  double dt = 0.05;
};

// L_0 = L_x and O_G = (B~_p1 + B~_p2)/2 on the default plaquette pair.
CouplingSpec default_coupling(const LatticeGeometry& geom, double dt = 0.05);

// Throws Error unless L_0 anticommutes with L_z, every term of O_G
// anticommutes with sigma^x on some decohered link, and O_G is Hermitian.
void validate_coupling(const CouplingSpec& spec, const LatticeGeometry& geom);

// Tr[exp(-2i dt O) rho] - 1. Commuting terms are exponentiated as a Pauli
// product; otherwise each Kraus branch is propagated by a Taylor series.
// Throws RangeError for non-finite dt, HermiticityError for non-Hermitian O.
std::complex<double> exact_F(const DecoheredState& d, const PauliSum& gauge_op, double dt);

// exp(-2i dt mean) (1 - 2 dt^2 variance) - 1.
std::complex<double> cumulant_F(double mean, double variance, double dt);

// Change of the logical density matrix in the L_0 eigenbasis (+1 first) for
// a logical state with amplitudes psi_l in that basis.
Eigen::Matrix2cd logical_deviation(const Eigen::Vector2cd& psi_l, std::complex<double> f);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct StabilityConfig {
  LatticeGeometry geometry{3, 2};
  std::vector<double> j_grid;
  std::vector<double> p_grid;
  std::vector<double> dts{0.05};
  CouplingSpec coupling;
  Sector sector;
  LanczosOptions lanczos;
  ChannelOptions channel;
  std::size_t workers = 1;
};

struct StabilityRow {
  double j = 0.0;
  double p_x = 0.0;
  double dt = 0.0;
  bool ok = true;
  std::string error;
  double mean = 0.0;
  double variance = 0.0;
  std::complex<double> exact_f;
  std::complex<double> cumulant_f;
};

// Rows ordered J, then p_x, then dt.
std::vector<StabilityRow> stability_scan(const StabilityConfig& config);

}  // namespace ghsc
