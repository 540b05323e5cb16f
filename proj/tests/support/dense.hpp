#pragma once

// Dense reference implementations used as independent oracles.

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <random>
#include <string>

#include "ghsc/pauli.hpp"

namespace ghsc::testing {

using DenseMatrix = Eigen::MatrixXcd;

inline Eigen::Matrix2cd letter_matrix(char c) {
  using C = std::complex<double>;
  Eigen::Matrix2cd m;
  switch (c) {
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, C(0, -1), C(0, 1), 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1; break;
  }
  return m;
}

// Kronecker product built from the printed letters; qubit q is bit q of the
// basis index, so qubit 0 is the rightmost factor.
inline DenseMatrix dense(const PauliOperator& p) {
  DenseMatrix out = DenseMatrix::Identity(1, 1);
  for (std::size_t q = 0; q < p.num_qubits(); ++q) {
    const Eigen::Matrix2cd a = letter_matrix(p.letter(q));
    DenseMatrix next(out.rows() * 2, out.cols() * 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) next.block(i * out.rows(), j * out.cols(), out.rows(), out.cols()) = a(i, j) * out;
    out = std::move(next);
  }
  return to_complex(p.phase()) * out;
}

inline DenseMatrix dense(const PauliSum& s) {
  const auto dim = Eigen::Index{1} << s.num_qubits();
  DenseMatrix out = DenseMatrix::Zero(dim, dim);
  for (const auto& t : s.terms()) out += t.coeff * dense(t.op);
  return out;
}

inline PauliOperator random_pauli(std::size_t n, std::mt19937_64& rng) {
  static constexpr char kLetters[] = {'I', 'X', 'Y', 'Z'};
  static constexpr const char* kSigns[] = {"+1", "+i", "-1", "-i"};
  std::string s = kSigns[rng() % 4];
  s.push_back(' ');
  for (std::size_t q = 0; q < n; ++q) s.push_back(kLetters[rng() % 4]);
  return PauliOperator::from_string(s);
}

// Single-qubit Hadamard and two-qubit CZ as full matrices on n qubits.
inline DenseMatrix dense_h(std::size_t n, std::size_t q) {
  const auto dim = Eigen::Index{1} << n;
  DenseMatrix u = DenseMatrix::Zero(dim, dim);
  const double r = 1.0 / std::sqrt(2.0);
  for (Eigen::Index b = 0; b < dim; ++b) {
    const auto flipped = b ^ (Eigen::Index{1} << q);
    const bool bit = (b >> q) & 1;
    u(b, b) += bit ? -r : r;
    u(flipped, b) += r;
  }
  return u;
}

inline DenseMatrix dense_cz(std::size_t n, std::size_t a, std::size_t b) {
  const auto dim = Eigen::Index{1} << n;
  DenseMatrix u = DenseMatrix::Identity(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    if (((i >> a) & 1) && ((i >> b) & 1)) u(i, i) = -1;
  return u;
}

}  // namespace ghsc::testing
