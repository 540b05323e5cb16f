#pragma once

// Signed Pauli strings in symplectic form, spans of them, and real/complex
// combinations (PauliSum). Qubit q is bit q everywhere in this library; the
// textual form lists qubit 0 first.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ghsc/gf2.hpp"

namespace ghsc {

// Overall phase in front of a product of the letters I, X, Y, Z.
enum class Phase : std::uint8_t { kPlusOne = 0, kPlusI = 1, kMinusOne = 2, kMinusI = 3 };

std::complex<double> to_complex(Phase p);

class PauliOperator {
 public:
  explicit PauliOperator(std::size_t num_qubits = 0);
  PauliOperator(BitVector x_bits, BitVector z_bits, Phase phase = Phase::kPlusOne);

  static PauliOperator identity(std::size_t num_qubits) { return PauliOperator(num_qubits); }
  static PauliOperator x_string(std::size_t num_qubits, std::span<const std::size_t> qubits);
  static PauliOperator z_string(std::size_t num_qubits, std::span<const std::size_t> qubits);
  static PauliOperator single(std::size_t num_qubits, std::size_t qubit, char letter);

  // Parses "+1 XIZY", "-i XX", "+i Y" (sign token, one space, letters I/X/Y/Z
  // or '_' for identity). Throws std::invalid_argument on malformed input.
  static PauliOperator from_string(std::string_view text);

  std::size_t num_qubits() const { return x_.size(); }
  bool x(std::size_t q) const { return x_.test(q); }
  bool z(std::size_t q) const { return z_.test(q); }
  char letter(std::size_t q) const;
  const BitVector& x_bits() const { return x_; }
  const BitVector& z_bits() const { return z_; }

  // Phase in front of the letter product (Y counted as the Hermitian Y).
  Phase phase() const;
  PauliOperator with_phase(Phase p) const;

  std::size_t weight() const { return (x_ | z_).count(); }
  bool is_identity_up_to_phase() const { return x_.none() && z_.none(); }
  // Hermitian iff the letter phase is +-1.
  bool is_hermitian() const;

  // Symplectic row x|z of length 2n.
  BitVector symplectic_row() const { return gf2::concat(x_, z_); }

  // x/z supports as 64-bit masks; requires num_qubits() <= 64.
  std::uint64_t x_mask() const;
  std::uint64_t z_mask() const;

  // i^k with k as stored: the operator equals i^k X^x Z^z (X block first).
  unsigned xz_phase_exponent() const { return xz_phase_; }

  std::string str() const;

  bool operator==(const PauliOperator& other) const = default;
  bool equal_up_to_phase(const PauliOperator& other) const { return x_ == other.x_ && z_ == other.z_; }

  PauliOperator operator*(const PauliOperator& rhs) const;

 private:
  BitVector x_;
  BitVector z_;
  // The operator equals i^xz_phase_ * X^x Z^z.
  unsigned xz_phase_ = 0;
};

PauliOperator multiply(const PauliOperator& p, const PauliOperator& q);
bool commutes(const PauliOperator& p, const PauliOperator& q);

// G P G^dagger for a Hadamard on qubit q and a controlled-Z on (a, b).
PauliOperator conjugate_h(const PauliOperator& p, std::size_t q);
PauliOperator conjugate_cz(const PauliOperator& p, std::size_t a, std::size_t b);

// A list of generators together with their GF(2) symplectic rows.
class PauliSpan {
 public:
  PauliSpan() = default;
  explicit PauliSpan(std::vector<PauliOperator> generators);

  const std::vector<PauliOperator>& generators() const { return generators_; }
  std::size_t size() const { return generators_.size(); }
  bool empty() const { return generators_.empty(); }
  std::size_t num_qubits() const { return num_qubits_; }
  const std::vector<BitVector>& gf2_matrix() const { return rows_; }

  // Number of independent generators modulo phases.
  std::size_t rank() const { return rank_; }

  bool contains(const PauliOperator& op) const;
  bool same_row_space(const PauliSpan& other) const;

  // Greedy independent subset, keeping the earliest generators.
  PauliSpan independent() const;

  PauliSpan joined(const PauliSpan& other) const;

 private:
  std::vector<PauliOperator> generators_;
  std::vector<BitVector> rows_;
  std::size_t num_qubits_ = 0;
  std::size_t rank_ = 0;
};

// Generators of the subgroup of <span> (mod phases) that commutes with every
// constraint. Generators that already commute are kept verbatim; the rest are
// combined along a GF(2) nullspace. The result is an independent set.
PauliSpan centralizer_in_span(const PauliSpan& span, std::span<const PauliOperator> constraints);

// Rank of the symplectic pairing matrix between span generators and constraints.
std::size_t pairing_rank(const PauliSpan& span, std::span<const PauliOperator> constraints);

struct PauliTerm {
  std::complex<double> coeff;
  // Stored with letter phase +1; any phase is absorbed into coeff.
  PauliOperator op;
};

class PauliSum {
 public:
  explicit PauliSum(std::size_t num_qubits = 0) : num_qubits_(num_qubits) {}

  static PauliSum from_operator(const PauliOperator& op, std::complex<double> coeff = 1.0);

  std::size_t num_qubits() const { return num_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  PauliSum& add(std::complex<double> coeff, const PauliOperator& op);
  PauliSum& operator+=(const PauliSum& rhs);
  PauliSum operator*(const PauliSum& rhs) const;
  PauliSum scaled(std::complex<double> factor) const;

  // Merges equal strings and drops coefficients below tol.
  PauliSum simplified(double tol = 1e-14) const;

  bool is_hermitian(double tol = 1e-12) const;
  // True iff all strings pairwise commute.
  bool terms_commute() const;
  bool commutes_with(const PauliOperator& op) const;

  std::string str() const;

 private:
  std::size_t num_qubits_;
  std::vector<PauliTerm> terms_;
};

}  // namespace ghsc
