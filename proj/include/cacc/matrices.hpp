#pragma once
// The 0-1 (and general state) matrices carved out of an iterated table:
// center matrices M_c fix the middle cell, partition matrices split the word
// after a prefix of p cells. Row/column multiplicities are counted exactly,
// working on the packed table wherever possible so the n = 12 elementary
// cases never materialize byte matrices on the hot path.

#include <algorithm>
#include <bit>
#include <cstring>
#include <ostream>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "cacc/evolve.hpp"

namespace cacc {

// Dense row-major matrix of cell states.
class StateMatrix {
 public:
  StateMatrix(std::size_t rows, std::size_t cols, int states)
      : rows_(rows), cols_(cols), states_(states),
        entries_(detail::checked_mul(rows, cols)) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  int states() const { return states_; }
  State operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  State& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  std::span<const State> row(std::size_t r) const {
    return std::span<const State>(entries_).subspan(r * cols_, cols_);
  }
  std::span<const State> entries() const { return entries_; }

 private:
  std::size_t rows_, cols_;
  int states_;
  std::vector<State> entries_;
};

struct RowColProfile {
  std::size_t distinct_rows = 0;
  std::size_t distinct_cols = 0;
  friend bool operator==(const RowColProfile&, const RowColProfile&) = default;
};

namespace detail {

// Maps a value to the one whose base-s digit string (fixed width) is
// reversed. Split tables keep memory at O(s^(digits/2)).
class DigitReverser {
 public:
  DigitReverser(int s, int digits) : digits_(digits) {
    const int lo = digits / 2, hi = digits - lo;
    lo_size_ = ipow(s, lo);
    hi_scale_ = ipow(s, hi);
    lo_ = build(s, lo);
    hi_ = build(s, hi);
  }

  std::size_t operator()(std::size_t v) const {
    // v = hi*lo_size + lo; reversed = rev(lo) * s^hi + rev(hi)
    return std::size_t(lo_[v % lo_size_]) * hi_scale_ + hi_[v / lo_size_];
  }

  int digits() const { return digits_; }

 private:
  static std::vector<std::uint32_t> build(int s, int width) {
    std::vector<std::uint32_t> t(ipow(s, width));
    for (std::size_t v = 0; v < t.size(); ++v) {
      std::size_t rest = v, rev = 0;
      for (int d = 0; d < width; ++d) {
        rev = rev * s + rest % s;
        rest /= s;
      }
      t[v] = static_cast<std::uint32_t>(rev);
    }
    return t;
  }

  int digits_;
  std::size_t lo_size_, hi_scale_;
  std::vector<std::uint32_t> lo_, hi_;
};

// A strided family of equal-length rows inside a flat array: row k occupies
// entries [offset + k*stride, offset + k*stride + len).
struct SliceGeom {
  std::size_t count;   // number of rows
  std::size_t len;     // entries per row
  std::size_t offset;  // first entry of row 0
  std::size_t stride;  // distance between row starts
};

// ---- bit-packed helpers (states == 2) -------------------------------------
// All callers keep offset and stride multiples of len, and len a power of
// two, so sub-word rows never straddle a 64-bit boundary.

inline std::uint64_t row_bits(std::span<const std::uint64_t> w, std::size_t pos,
                              std::size_t len) {
  const std::uint64_t mask =
      len >= 64 ? ~std::uint64_t(0) : (std::uint64_t(1) << len) - 1;
  return (w[pos >> 6] >> (pos & 63)) & mask;
}

inline std::size_t distinct_bit_rows(std::span<const std::uint64_t> words,
                                     const SliceGeom& g) {
  if (g.len <= 22) {
    // Small row values: presence bitmap, O(count) with <= 512 KiB of marks.
    std::vector<std::uint64_t> seen((std::size_t(1) << g.len) / 64 + 1, 0);
    std::size_t distinct = 0;
    for (std::size_t k = 0; k < g.count; ++k) {
      const std::uint64_t v = row_bits(words, g.offset + k * g.stride, g.len);
      const std::uint64_t bit = std::uint64_t(1) << (v & 63);
      if (!(seen[v >> 6] & bit)) {
        seen[v >> 6] |= bit;
        ++distinct;
      }
    }
    return distinct;
  }
  if (g.len <= 64) {
    std::vector<std::uint64_t> vals(g.count);
    for (std::size_t k = 0; k < g.count; ++k)
      vals[k] = row_bits(words, g.offset + k * g.stride, g.len);
    std::sort(vals.begin(), vals.end());
    return std::unique(vals.begin(), vals.end()) - vals.begin();
  }
  // Long rows: whole 64-bit words, hashed as byte strings. The hash set
  // verifies equality on collision, so the count stays exact.
  const std::size_t row_words = g.len / 64;
  std::unordered_set<std::string_view> seen;
  seen.reserve(g.count * 2);
  const char* base = reinterpret_cast<const char*>(words.data());
  for (std::size_t k = 0; k < g.count; ++k) {
    const std::size_t word0 = (g.offset + k * g.stride) / 64;
    seen.emplace(base + word0 * 8, row_words * 8);
  }
  return seen.size();
}

// Packed transpose: returns g.len rows of g.count bits each, row j starting
// at word j * ceil(count/64).
inline std::vector<std::uint64_t> transpose_bits(std::span<const std::uint64_t> words,
                                                 const SliceGeom& g) {
  const std::size_t out_words = (g.count + 63) / 64;
  std::vector<std::uint64_t> out(checked_mul(g.len, out_words), 0);
  for (std::size_t k = 0; k < g.count; ++k) {
    const std::size_t pos = g.offset + k * g.stride;
    const std::uint64_t kbit = std::uint64_t(1) << (k & 63);
    const std::size_t kword = k >> 6;
    if (g.len < 64) {
      std::uint64_t v = row_bits(words, pos, g.len);
      while (v) {
        const unsigned j = std::countr_zero(v);
        out[j * out_words + kword] |= kbit;
        v &= v - 1;
      }
    } else {
      for (std::size_t w = 0; w < g.len / 64; ++w) {
        std::uint64_t v = words[(pos >> 6) + w];
        while (v) {
          const unsigned b = std::countr_zero(v);
          out[(w * 64 + b) * out_words + kword] |= kbit;
          v &= v - 1;
        }
      }
    }
  }
  return out;
}

// ---- byte helpers (states > 2) ---------------------------------------------

inline std::size_t distinct_byte_rows(std::span<const State> bytes,
                                      const SliceGeom& g) {
  if (g.len <= 8) {
    std::vector<std::uint64_t> vals(g.count);
    for (std::size_t k = 0; k < g.count; ++k) {
      std::uint64_t v = 0;
      std::memcpy(&v, bytes.data() + g.offset + k * g.stride, g.len);
      vals[k] = v;
    }
    std::sort(vals.begin(), vals.end());
    return std::unique(vals.begin(), vals.end()) - vals.begin();
  }
  std::unordered_set<std::string_view> seen;
  seen.reserve(g.count * 2);
  const char* base = reinterpret_cast<const char*>(bytes.data());
  for (std::size_t k = 0; k < g.count; ++k)
    seen.emplace(base + g.offset + k * g.stride, g.len);
  return seen.size();
}

inline std::vector<State> transpose_byte_rows(std::span<const State> bytes,
                                              const SliceGeom& g) {
  std::vector<State> out(checked_mul(g.len, g.count));
  for (std::size_t k = 0; k < g.count; ++k)
    for (std::size_t j = 0; j < g.len; ++j)
      out[j * g.count + k] = bytes[g.offset + k * g.stride + j];
  return out;
}

// Exact distinct row and column counts for a strided row family.
inline RowColProfile profile_slices(const detail::StateArray& a, const SliceGeom& g) {
  RowColProfile p;
  if (a.packed()) {
    p.distinct_rows = distinct_bit_rows(a.words(), g);
    const auto t = transpose_bits(a.words(), g);
    const std::size_t out_words = (g.count + 63) / 64;
    p.distinct_cols = distinct_bit_rows(
        t, SliceGeom{.count = g.len, .len = g.count, .offset = 0, .stride = out_words * 64});
  } else {
    p.distinct_rows = distinct_byte_rows(a.bytes(), g);
    const auto t = transpose_byte_rows(a.bytes(), g);
    p.distinct_cols = distinct_byte_rows(
        t, SliceGeom{.count = g.len, .len = g.count, .offset = 0, .stride = g.count});
  }
  return p;
}

}  // namespace detail

// M_c(i, j) = f^n(reverse(digits(i)), c, digits(j)): both half-words use
// r*n base-s digits, with i's cells read outward from the center.
inline StateMatrix build_center_matrix(const IteratedTable& t, State center) {
  if (center >= t.states())
    throw std::invalid_argument("center matrix: center state out of range");
  const int s = t.states();
  const std::size_t side = detail::ipow(s, t.side_length());
  const detail::DigitReverser rev(s, t.side_length());
  StateMatrix m(side, side, s);
  for (std::size_t i = 0; i < side; ++i) {
    const std::size_t base = (rev(i) * s + center) * side;
    for (std::size_t j = 0; j < side; ++j) m.at(i, j) = t.at(base + j);
  }
  return m;
}

// M_p(u, v) = f^n(u, reverse(digits(v))): u takes the p leftmost cells,
// v's digits give the remaining cells read from the right end inward.
inline StateMatrix build_partition_matrix(const IteratedTable& t, int p) {
  if (p < 1 || p > 2 * t.side_length())
    throw std::invalid_argument("partition matrix: need 1 <= p <= 2*r*n");
  const int s = t.states();
  const std::size_t rows = detail::ipow(s, p);
  const std::size_t cols = detail::ipow(s, t.word_length() - p);
  const detail::DigitReverser rev(s, t.word_length() - p);
  StateMatrix m(rows, cols, s);
  for (std::size_t u = 0; u < rows; ++u) {
    const std::size_t base = u * cols;
    for (std::size_t v = 0; v < cols; ++v) m.at(u, v) = t.at(base + rev(v));
  }
  return m;
}

// Exact distinct row/column counts of a materialized matrix.
inline RowColProfile profile(const StateMatrix& m) {
  const detail::SliceGeom g{.count = m.rows(), .len = m.cols(), .offset = 0,
                            .stride = m.cols()};
  RowColProfile p;
  p.distinct_rows = detail::distinct_byte_rows(m.entries(), g);
  const auto t = detail::transpose_byte_rows(m.entries(), g);
  p.distinct_cols = detail::distinct_byte_rows(
      t, detail::SliceGeom{.count = m.cols(), .len = m.rows(), .offset = 0,
                           .stride = m.rows()});
  return p;
}

// Profile of M_c computed directly on the packed table. Row order differs
// from build_center_matrix by a permutation only, which multiplicity counts
// cannot see.
inline RowColProfile center_profile(const IteratedTable& t, State center) {
  if (center >= t.states())
    throw std::invalid_argument("center profile: center state out of range");
  const std::size_t side = detail::ipow(std::size_t(t.states()), t.side_length());
  return detail::profile_slices(
      t.entries(),
      detail::SliceGeom{.count = side, .len = side,
                        .offset = std::size_t(center) * side,
                        .stride = std::size_t(t.states()) * side});
}

// Profile of M_p computed directly on the packed table (column order again
// differs by a permutation only).
inline RowColProfile partition_profile(const IteratedTable& t, int p) {
  if (p < 1 || p > 2 * t.side_length())
    throw std::invalid_argument("partition profile: need 1 <= p <= 2*r*n");
  const std::size_t rows = detail::ipow(std::size_t(t.states()), p);
  const std::size_t cols = t.size() / rows;
  return detail::profile_slices(
      t.entries(), detail::SliceGeom{.count = rows, .len = cols, .offset = 0,
                                     .stride = cols});
}

// Rank over GF(2). Only for binary matrices.
inline std::size_t rank_gf2(const StateMatrix& m) {
  if (m.states() != 2)
    throw std::invalid_argument("rank_gf2: matrix must be binary");
  const std::size_t words = (m.cols() + 63) / 64;
  std::vector<std::vector<std::uint64_t>> pivots;  // pivots[i] has pivot col pivot_col[i]
  std::vector<std::size_t> pivot_col;
  std::vector<std::uint64_t> row(words);
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::fill(row.begin(), row.end(), 0);
    const auto src = m.row(r);
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (src[c]) row[c >> 6] |= std::uint64_t(1) << (c & 63);
    for (std::size_t i = 0; i < pivots.size(); ++i) {
      const std::size_t pc = pivot_col[i];
      if (row[pc >> 6] >> (pc & 63) & 1)
        for (std::size_t w = 0; w < words; ++w) row[w] ^= pivots[i][w];
    }
    for (std::size_t w = 0; w < words; ++w)
      if (row[w]) {
        pivot_col.push_back(w * 64 + std::countr_zero(row[w]));
        pivots.push_back(row);
        break;
      }
  }
  return pivots.size();
}

// Binary matrices export as PBM "P4" (state 1 = black, rows packed MSB
// first); wider alphabets fall back to PGM "P5" with state k mapped to gray
// floor(255*k/(s-1)).
inline void export_pbm(const StateMatrix& m, std::ostream& os) {
  if (m.states() == 2) {
    os << "P4\n" << m.cols() << " " << m.rows() << "\n";
    std::vector<char> line((m.cols() + 7) / 8);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      std::fill(line.begin(), line.end(), 0);
      const auto row = m.row(r);
      for (std::size_t c = 0; c < m.cols(); ++c)
        if (row[c]) line[c >> 3] |= char(0x80 >> (c & 7));
      os.write(line.data(), line.size());
    }
  } else {
    os << "P5\n" << m.cols() << " " << m.rows() << "\n255\n";
    std::vector<char> line(m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
      const auto row = m.row(r);
      for (std::size_t c = 0; c < m.cols(); ++c)
        line[c] = static_cast<char>(255 * row[c] / (m.states() - 1));
      os.write(line.data(), line.size());
    }
  }
}

// A spacetime triangle as an image: row 0 is the last configuration, the
// initial word is the bottom scanline, shrinking rows are centered and
// padded with state 0.
inline StateMatrix spacetime_image(const SpacetimeDiagram& d, int states, int radius) {
  if (d.rows.empty()) throw std::invalid_argument("spacetime image: empty diagram");
  const std::size_t width = d.rows.front().size();
  StateMatrix m(d.rows.size(), width, states);
  for (std::size_t t = 0; t < d.rows.size(); ++t) {
    const auto& row = d.rows[t];
    const std::size_t off = std::size_t(radius) * t;
    for (std::size_t j = 0; j < row.size(); ++j)
      m.at(d.rows.size() - 1 - t, off + j) = row[j];
  }
  return m;
}

}  // namespace cacc
