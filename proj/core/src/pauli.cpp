#include "ghsc/pauli.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "ghsc/errors.hpp"

namespace ghsc {

namespace {

void require_same_size(const PauliOperator& p, const PauliOperator& q) {
  if (p.num_qubits() != q.num_qubits()) {
    throw DimensionError("Pauli operators act on " + std::to_string(p.num_qubits()) + " and " +
                         std::to_string(q.num_qubits()) + " qubits");
  }
}

unsigned count_y(const BitVector& x, const BitVector& z) { return static_cast<unsigned>((x & z).count() % 4); }

std::uint64_t to_mask(const BitVector& b) {
  if (b.size() > 64) throw SizeError("mask requested for more than 64 qubits");
  std::uint64_t m = 0;
  for (std::size_t i = b.find_first(); i != BitVector::npos; i = b.find_next(i)) m |= std::uint64_t{1} << i;
  return m;
}

}  // namespace

std::complex<double> to_complex(Phase p) {
  switch (p) {
    case Phase::kPlusOne: return {1.0, 0.0};
    case Phase::kPlusI: return {0.0, 1.0};
    case Phase::kMinusOne: return {-1.0, 0.0};
    case Phase::kMinusI: return {0.0, -1.0};
  }
  return {1.0, 0.0};
}

PauliOperator::PauliOperator(std::size_t num_qubits) : x_(num_qubits), z_(num_qubits) {}

PauliOperator::PauliOperator(BitVector x_bits, BitVector z_bits, Phase phase)
    : x_(std::move(x_bits)), z_(std::move(z_bits)) {
  if (x_.size() != z_.size()) throw DimensionError("x and z bit vectors differ in length");
  xz_phase_ = (static_cast<unsigned>(phase) + count_y(x_, z_)) % 4;
}

PauliOperator PauliOperator::x_string(std::size_t num_qubits, std::span<const std::size_t> qubits) {
  PauliOperator p(num_qubits);
  for (auto q : qubits) p.x_.flip(q);
  return p;
}

PauliOperator PauliOperator::z_string(std::size_t num_qubits, std::span<const std::size_t> qubits) {
  PauliOperator p(num_qubits);
  for (auto q : qubits) p.z_.flip(q);
  return p;
}

PauliOperator PauliOperator::single(std::size_t num_qubits, std::size_t qubit, char letter) {
  BitVector x(num_qubits), z(num_qubits);
  switch (letter) {
    case 'I': break;
    case 'X': x.set(qubit); break;
    case 'Z': z.set(qubit); break;
    case 'Y':
      x.set(qubit);
      z.set(qubit);
      break;
    default: throw std::invalid_argument(std::string("unknown Pauli letter '") + letter + "'");
  }
  return PauliOperator(std::move(x), std::move(z));
}

PauliOperator PauliOperator::from_string(std::string_view text) {
  const auto space = text.find(' ');
  if (space == std::string_view::npos) throw std::invalid_argument("Pauli string lacks a sign token");
  const auto sign = text.substr(0, space);
  Phase phase;
  if (sign == "+1") phase = Phase::kPlusOne;
  else if (sign == "-1") phase = Phase::kMinusOne;
  else if (sign == "+i") phase = Phase::kPlusI;
  else if (sign == "-i") phase = Phase::kMinusI;
  else throw std::invalid_argument("bad Pauli sign token '" + std::string(sign) + "'");
  const auto letters = text.substr(space + 1);
  BitVector x(letters.size()), z(letters.size());
  for (std::size_t q = 0; q < letters.size(); ++q) {
    switch (letters[q]) {
      case 'I':
      case '_': break;
      case 'X': x.set(q); break;
      case 'Z': z.set(q); break;
      case 'Y':
        x.set(q);
        z.set(q);
        break;
      default:
        throw std::invalid_argument("bad Pauli letter '" + std::string(1, letters[q]) + "' at position " +
                                    std::to_string(q));
    }
  }
  return PauliOperator(std::move(x), std::move(z), phase);
}

char PauliOperator::letter(std::size_t q) const {
  const bool xb = x_.test(q), zb = z_.test(q);
  if (xb && zb) return 'Y';
  if (xb) return 'X';
  if (zb) return 'Z';
  return 'I';
}

Phase PauliOperator::phase() const { return static_cast<Phase>((xz_phase_ + 4 - count_y(x_, z_)) % 4); }

PauliOperator PauliOperator::with_phase(Phase p) const {
  PauliOperator out = *this;
  out.xz_phase_ = (static_cast<unsigned>(p) + count_y(x_, z_)) % 4;
  return out;
}

bool PauliOperator::is_hermitian() const { return static_cast<unsigned>(phase()) % 2 == 0; }

std::uint64_t PauliOperator::x_mask() const { return to_mask(x_); }
std::uint64_t PauliOperator::z_mask() const { return to_mask(z_); }

std::string PauliOperator::str() const {
  static constexpr const char* kTokens[] = {"+1", "+i", "-1", "-i"};
  std::string out = kTokens[static_cast<unsigned>(phase())];
  out.push_back(' ');
  for (std::size_t q = 0; q < num_qubits(); ++q) out.push_back(letter(q));
  return out;
}

PauliOperator PauliOperator::operator*(const PauliOperator& rhs) const { return multiply(*this, rhs); }

PauliOperator multiply(const PauliOperator& p, const PauliOperator& q) {
  require_same_size(p, q);
  PauliOperator out(p.x_bits() ^ q.x_bits(), p.z_bits() ^ q.z_bits());
  // Moving Z^{z1} past X^{x2} costs (-1)^{|z1 & x2|}.
  const unsigned k = p.xz_phase_exponent() + q.xz_phase_exponent() +
                     2 * static_cast<unsigned>((p.z_bits() & q.x_bits()).count() % 2);
  const unsigned ny = count_y(out.x_bits(), out.z_bits());
  return out.with_phase(static_cast<Phase>((k + 4 - ny) % 4));
}

bool commutes(const PauliOperator& p, const PauliOperator& q) {
  require_same_size(p, q);
  const auto s = (p.x_bits() & q.z_bits()).count() + (p.z_bits() & q.x_bits()).count();
  return s % 2 == 0;
}

PauliOperator conjugate_h(const PauliOperator& p, std::size_t q) {
  BitVector x = p.x_bits(), z = p.z_bits();
  unsigned k = p.xz_phase_exponent();
  const bool xb = x.test(q), zb = z.test(q);
  if (xb && zb) k += 2;
  x[q] = zb;
  z[q] = xb;
  PauliOperator out(std::move(x), std::move(z));
  return out.with_phase(static_cast<Phase>((k + 4 - count_y(out.x_bits(), out.z_bits())) % 4));
}

PauliOperator conjugate_cz(const PauliOperator& p, std::size_t a, std::size_t b) {
  BitVector x = p.x_bits(), z = p.z_bits();
  unsigned k = p.xz_phase_exponent();
  const bool xa = x.test(a), xb = x.test(b);
  if (xa && xb) k += 2;
  if (xb) z.flip(a);
  if (xa) z.flip(b);
  PauliOperator out(std::move(x), std::move(z));
  return out.with_phase(static_cast<Phase>((k + 4 - count_y(out.x_bits(), out.z_bits())) % 4));
}

PauliSpan::PauliSpan(std::vector<PauliOperator> generators) : generators_(std::move(generators)) {
  if (!generators_.empty()) num_qubits_ = generators_.front().num_qubits();
  rows_.reserve(generators_.size());
  for (const auto& g : generators_) {
    if (g.num_qubits() != num_qubits_) throw DimensionError("span generators act on different qubit counts");
    rows_.push_back(g.symplectic_row());
  }
  rank_ = gf2::rank(rows_);
}

bool PauliSpan::contains(const PauliOperator& op) const {
  if (op.is_identity_up_to_phase()) return true;
  if (op.num_qubits() != num_qubits_) throw DimensionError("operator size does not match span");
  return gf2::in_row_space(rows_, op.symplectic_row());
}

bool PauliSpan::same_row_space(const PauliSpan& other) const {
  if (rank_ != other.rank_) return false;
  if (rank_ == 0) return true;
  if (num_qubits_ != other.num_qubits_) return false;
  auto all = rows_;
  all.insert(all.end(), other.rows_.begin(), other.rows_.end());
  return gf2::rank(std::move(all)) == rank_;
}

PauliSpan PauliSpan::independent() const {
  std::vector<PauliOperator> kept;
  std::vector<BitVector> basis;
  for (std::size_t i = 0; i < generators_.size(); ++i) {
    basis.push_back(rows_[i]);
    if (gf2::rank(basis) == basis.size()) {
      kept.push_back(generators_[i]);
    } else {
      basis.pop_back();
    }
  }
  return PauliSpan(std::move(kept));
}

PauliSpan PauliSpan::joined(const PauliSpan& other) const {
  auto gens = generators_;
  gens.insert(gens.end(), other.generators_.begin(), other.generators_.end());
  return PauliSpan(std::move(gens));
}

namespace {

std::vector<BitVector> pairing_matrix(const PauliSpan& span, std::span<const PauliOperator> constraints) {
  std::vector<BitVector> m;
  m.reserve(span.size());
  for (const auto& g : span.generators()) {
    BitVector row(constraints.size());
    for (std::size_t j = 0; j < constraints.size(); ++j) row[j] = !commutes(g, constraints[j]);
    m.push_back(std::move(row));
  }
  return m;
}

}  // namespace

std::size_t pairing_rank(const PauliSpan& span, std::span<const PauliOperator> constraints) {
  if (span.empty() || constraints.empty()) return 0;
  return gf2::rank(pairing_matrix(span, constraints));
}

PauliSpan centralizer_in_span(const PauliSpan& span, std::span<const PauliOperator> constraints) {
  for (const auto& c : constraints) {
    if (c.num_qubits() != span.num_qubits() && !span.empty()) throw DimensionError("constraint size does not match span");
  }
  const auto& gens = span.generators();
  const auto m = pairing_matrix(span, constraints);

  std::vector<std::size_t> clashing;
  std::vector<BitVector> candidates;  // selection vectors over all generators
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (m[i].none()) {
      BitVector sel(gens.size());
      sel.set(i);
      candidates.push_back(std::move(sel));
    } else {
      clashing.push_back(i);
    }
  }
  std::vector<BitVector> sub;
  for (auto i : clashing) sub.push_back(m[i]);
  for (const auto& a : gf2::left_nullspace(sub)) {
    BitVector sel(gens.size());
    for (std::size_t t = 0; t < clashing.size(); ++t) sel[clashing[t]] = a[t];
    candidates.push_back(std::move(sel));
  }
  // Candidates with a single commuting generator come first in index order,
  // so those generators are kept verbatim.
  std::vector<PauliOperator> out;
  std::vector<BitVector> basis;
  for (const auto& sel : candidates) {
    PauliOperator prod = PauliOperator::identity(span.num_qubits());
    for (std::size_t i = sel.find_first(); i != BitVector::npos; i = sel.find_next(i)) prod = multiply(prod, gens[i]);
    if (prod.is_identity_up_to_phase()) continue;
    basis.push_back(prod.symplectic_row());
    if (gf2::rank(basis) == basis.size()) {
      out.push_back(std::move(prod));
    } else {
      basis.pop_back();
    }
  }
  return PauliSpan(std::move(out));
}

PauliSum PauliSum::from_operator(const PauliOperator& op, std::complex<double> coeff) {
  PauliSum s(op.num_qubits());
  s.add(coeff, op);
  return s;
}

PauliSum& PauliSum::add(std::complex<double> coeff, const PauliOperator& op) {
  if (op.num_qubits() != num_qubits_) throw DimensionError("term size does not match PauliSum");
  terms_.push_back({coeff * to_complex(op.phase()), op.with_phase(Phase::kPlusOne)});
  return *this;
}

PauliSum& PauliSum::operator+=(const PauliSum& rhs) {
  if (rhs.num_qubits_ != num_qubits_) throw DimensionError("PauliSum sizes differ");
  terms_.insert(terms_.end(), rhs.terms_.begin(), rhs.terms_.end());
  return *this;
}

PauliSum PauliSum::operator*(const PauliSum& rhs) const {
  if (rhs.num_qubits_ != num_qubits_) throw DimensionError("PauliSum sizes differ");
  PauliSum out(num_qubits_);
  for (const auto& a : terms_) {
    for (const auto& b : rhs.terms_) out.add(a.coeff * b.coeff, multiply(a.op, b.op));
  }
  return out.simplified(0.0);
}

PauliSum PauliSum::scaled(std::complex<double> factor) const {
  PauliSum out = *this;
  for (auto& t : out.terms_) t.coeff *= factor;
  return out;
}

PauliSum PauliSum::simplified(double tol) const {
  auto sorted = terms_;
  auto key_less = [](const PauliTerm& a, const PauliTerm& b) {
    if (a.op.x_bits() != b.op.x_bits()) return a.op.x_bits() < b.op.x_bits();
    return a.op.z_bits() < b.op.z_bits();
  };
  std::stable_sort(sorted.begin(), sorted.end(), key_less);
  PauliSum out(num_qubits_);
  for (const auto& t : sorted) {
    if (!out.terms_.empty() && out.terms_.back().op == t.op) {
      out.terms_.back().coeff += t.coeff;
    } else {
      out.terms_.push_back(t);
    }
  }
  std::erase_if(out.terms_, [tol](const PauliTerm& t) { return std::abs(t.coeff) <= tol; });
  return out;
}

bool PauliSum::is_hermitian(double tol) const {
  const auto s = simplified(0.0);
  return std::all_of(s.terms_.begin(), s.terms_.end(),
                     [tol](const PauliTerm& t) { return std::abs(t.coeff.imag()) <= tol; });
}

bool PauliSum::terms_commute() const {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    for (std::size_t j = i + 1; j < terms_.size(); ++j) {
      if (!commutes(terms_[i].op, terms_[j].op)) return false;
    }
  }
  return true;
}

bool PauliSum::commutes_with(const PauliOperator& op) const {
  return std::all_of(terms_.begin(), terms_.end(), [&op](const PauliTerm& t) { return commutes(t.op, op); });
}

std::string PauliSum::str() const {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (const auto& t : terms_) {
    if (!first) os << " + ";
    first = false;
    os << '(' << t.coeff.real();
    if (t.coeff.imag() != 0.0) os << (t.coeff.imag() < 0 ? "-" : "+") << std::abs(t.coeff.imag()) << 'i';
    os << ")*[" << t.op.str() << ']';
  }
  if (first) os << '0';
  return os.str();
}

}  // namespace ghsc
