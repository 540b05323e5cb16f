#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <boost/dynamic_bitset.hpp>

namespace ghsc {

using BitVector = boost::dynamic_bitset<std::uint64_t>;

namespace gf2 {

// Rank over GF(2). Rows may have any common length.
std::size_t rank(std::vector<BitVector> rows);

// Reduced row echelon form; pivots are chosen at the lowest column index
// first, and within a column the lowest remaining row index wins, so the
// result is reproducible. Zero rows are dropped.
std::vector<BitVector> rref(std::vector<BitVector> rows);

// Basis of {a in GF(2)^m : sum_i a_i rows[i] = 0}, where m = rows.size().
// Returned vectors have length m and are in reduced echelon form.
std::vector<BitVector> left_nullspace(const std::vector<BitVector>& rows);

// True iff v lies in the row space of rows.
bool in_row_space(const std::vector<BitVector>& rows, const BitVector& v);

// Concatenate a and b into one vector of length a.size() + b.size().
BitVector concat(const BitVector& a, const BitVector& b);

// Dot product over GF(2).
inline bool dot(const BitVector& a, const BitVector& b) { return (a & b).count() % 2 == 1; }

}  // namespace gf2
}  // namespace ghsc
