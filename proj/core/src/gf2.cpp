#include "ghsc/gf2.hpp"

#include <utility>

namespace ghsc::gf2 {

namespace {

// In-place elimination. Returns the number of pivot rows, which are moved to
// the front of `rows` in pivot-column order.
std::size_t eliminate(std::vector<BitVector>& rows, bool reduce_above) {
  if (rows.empty()) return 0;
  const std::size_t ncols = rows.front().size();
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < ncols && pivot_row < rows.size(); ++col) {
    std::size_t found = rows.size();
    for (std::size_t r = pivot_row; r < rows.size(); ++r) {
      if (rows[r].test(col)) {
        found = r;
        break;
      }
    }
    if (found == rows.size()) continue;
    std::swap(rows[pivot_row], rows[found]);
    for (std::size_t r = reduce_above ? 0 : pivot_row + 1; r < rows.size(); ++r) {
      if (r != pivot_row && rows[r].test(col)) rows[r] ^= rows[pivot_row];
    }
    ++pivot_row;
  }
  return pivot_row;
}

}  // namespace

std::size_t rank(std::vector<BitVector> rows) { return eliminate(rows, false); }

std::vector<BitVector> rref(std::vector<BitVector> rows) {
  const std::size_t r = eliminate(rows, true);
  rows.resize(r);
  return rows;
}

std::vector<BitVector> left_nullspace(const std::vector<BitVector>& rows) {
  const std::size_t m = rows.size();
  if (m == 0) return {};
  const std::size_t ncols = rows.front().size();
  // Augment each row with an identity tag; rows whose data part vanishes
  // after elimination carry a null combination in the tag.
  std::vector<BitVector> aug;
  aug.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    BitVector tag(m);
    tag.set(i);
    aug.push_back(concat(rows[i], tag));
  }
  // Eliminate on the data columns only.
  std::size_t pivot_row = 0;
  for (std::size_t col = 0; col < ncols && pivot_row < m; ++col) {
    std::size_t found = m;
    for (std::size_t r = pivot_row; r < m; ++r) {
      if (aug[r].test(col)) {
        found = r;
        break;
      }
    }
    if (found == m) continue;
    std::swap(aug[pivot_row], aug[found]);
    for (std::size_t r = pivot_row + 1; r < m; ++r) {
      if (aug[r].test(col)) aug[r] ^= aug[pivot_row];
    }
    ++pivot_row;
  }
  std::vector<BitVector> null;
  for (std::size_t r = pivot_row; r < m; ++r) {
    BitVector tag(m);
    for (std::size_t i = 0; i < m; ++i) tag[i] = aug[r][ncols + i];
    null.push_back(std::move(tag));
  }
  return rref(std::move(null));
}

bool in_row_space(const std::vector<BitVector>& rows, const BitVector& v) {
  if (v.none()) return true;
  auto extended = rows;
  const std::size_t before = rank(rows);
  extended.push_back(v);
  return rank(std::move(extended)) == before;
}

BitVector concat(const BitVector& a, const BitVector& b) {
  BitVector out(a.size() + b.size());
  for (std::size_t i = a.find_first(); i != BitVector::npos; i = a.find_next(i)) out.set(i);
  for (std::size_t i = b.find_first(); i != BitVector::npos; i = b.find_next(i)) out.set(a.size() + i);
  return out;
}

}  // namespace ghsc::gf2
