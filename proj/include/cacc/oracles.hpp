#pragma once
// Closed-form companions for the worked examples: the block-count matrices
// of rules 132 and 23, the parity form of rule 105, a 3-state automaton
// whose center survival depends only on nearest-front distances, and a
// 4-state automaton comparing a word against the mirrored copy on the other
// side of the center. Each formula here is checked against brute force by
// the test suites; on any disagreement the tabulated truth wins.

#include <cstdlib>
#include <limits>

#include "cacc/rules.hpp"
#include "cacc/evolve.hpp"

namespace cacc {

// --- rule 132 ----------------------------------------------------------------

// d_n of rule 132: the center survives exactly when it sits in the middle of
// an odd block of ones, so the matrix rows count the ones adjacent to the
// center, giving n+1 classes.
inline std::size_t rule132_dn(int n) {
  if (n < 1) throw std::invalid_argument("rule132_dn: need n >= 1");
  return static_cast<std::size_t>(n) + 1;
}

// Distinct rows of M_c for rule 132: with center 0 every row is zero; with
// center 1 the rows are indexed by the run of ones touching the center.
inline std::size_t rule132_center_rows(int n, State center) {
  if (n < 1) throw std::invalid_argument("rule132_center_rows: need n >= 1");
  if (center > 1) throw std::invalid_argument("rule132_center_rows: binary rule");
  return center == 0 ? 1 : static_cast<std::size_t>(n) + 1;
}

// Index of the row (equally: column) of M_1 whose half-word is a run of k
// ones against the center padded with zeros. M_1 restricted to these n+1
// rows and columns is the identity.
inline std::size_t rule132_run_index(int n, int k) {
  if (k < 0 || k > n) throw std::invalid_argument("rule132_run_index: need 0 <= k <= n");
  return ((std::size_t(1) << k) - 1) << (n - k);
}

// --- rule 23 -----------------------------------------------------------------

inline std::size_t rule23_dn(int n) {
  if (n < 1) throw std::invalid_argument("rule23_dn: need n >= 1");
  return static_cast<std::size_t>(n) + 1;
}

// --- rule 105 ----------------------------------------------------------------

// Rule 105 is the complemented parity of the neighborhood.
inline State rule105_formula(State a, State b, State c) {
  if (a > 1 || b > 1 || c > 1)
    throw std::invalid_argument("rule105_formula: binary states only");
  return static_cast<State>(1 ^ (a ^ b ^ c));
}

// --- 3-state automaton --------------------------------------------------------

// f(i,j,k) = 0 when j = 0 and i = k, otherwise max(i,j,k). Zeros persist
// only between equal neighbors; ones spread over zeros; twos spread over
// everything.
inline RuleTable three_state_rule() {
  std::vector<State> t(27);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        const int idx = i * 9 + j * 3 + k;
        t[idx] = (j == 0 && i == k)
                     ? 0
                     : static_cast<State>(std::max({i, j, k}));
      }
  return RuleTable(3, 1, std::move(t));
}

// Distances from the center to the nearest fronts on each side; kFar means
// none within the half-word. The nearest 1 is only looked for strictly in
// front of the nearest 2, so l1 < l2 and r1 < r2 whenever finite.
struct ThreeStateContext {
  static constexpr int kFar = std::numeric_limits<int>::max();
  int l1 = kFar;
  int l2 = kFar;
  int r1 = kFar;
  int r2 = kFar;

  friend bool operator==(const ThreeStateContext&, const ThreeStateContext&) = default;
};

inline ThreeStateContext three_state_context(std::span<const State> w, int n) {
  if (static_cast<int>(w.size()) != 2 * n + 1)
    throw std::invalid_argument("three_state_context: word length must be 2n+1");
  ThreeStateContext ctx;
  for (int d = 1; d <= n; ++d)
    if (w[n + d] == 2) {
      ctx.r2 = d;
      break;
    }
  for (int d = 1; d <= n && d < ctx.r2; ++d)
    if (w[n + d] == 1) {
      ctx.r1 = d;
      break;
    }
  for (int d = 1; d <= n; ++d)
    if (w[n - d] == 2) {
      ctx.l2 = d;
      break;
    }
  for (int d = 1; d <= n && d < ctx.l2; ++d)
    if (w[n - d] == 1) {
      ctx.l1 = d;
      break;
    }
  return ctx;
}

// State of the center cell after n steps, from the front distances alone.
// A front at distance d first touches the center at step d; twos overrun
// everything, ones only the zeros, and a zero outlives a front pair exactly
// when it arrives symmetrically.
inline State three_state_predict(State c, const ThreeStateContext& ctx, int n) {
  if (c > 2) throw std::invalid_argument("three_state_predict: state out of range");
  if (c == 2) return 2;
  const bool twos_away = ctx.l2 > n && ctx.r2 > n;
  if (c == 1) return twos_away ? State(1) : State(2);
  const bool sym2 = twos_away || ctx.l2 == ctx.r2;
  const bool sym1 = (ctx.l1 > n && ctx.r1 > n) || ctx.l1 == ctx.r1;
  if (sym2 && sym1) return 0;
  if (!sym2) return 2;
  // asymmetric ones flip the center to 1; a symmetric in-range pair of twos
  // then overruns it
  return ctx.l2 <= n ? State(2) : State(1);
}

// Bounds on d_n for the 3-state automaton: at least every symmetric context
// class, at most the product of per-side front encodings.
struct ThreeStateBounds {
  std::size_t lower = 0;
  std::size_t upper = 0;
};

inline ThreeStateBounds three_state_dn_bounds(int n) {
  if (n < 1) throw std::invalid_argument("three_state_dn_bounds: need n >= 1");
  const std::size_t m = static_cast<std::size_t>(n) + 1;
  return ThreeStateBounds{.lower = m * (m + 1) / 2, .upper = 4 * m * m};
}

// --- 4-state comparison automaton ---------------------------------------------

// States 0,1 are plain bits, 2,3 their marked copies ("tilde"). Plain bits
// drift right, marked bits drift left, and a center 1 facing a marked bit
// keeps the running comparison going.
inline RuleTable comparison_rule() {
  std::vector<State> t(64);
  for (int x = 0; x < 4; ++x)
    for (int c = 0; c < 4; ++c)
      for (int y = 0; y < 4; ++y) {
        const int idx = x * 16 + c * 4 + y;
        State out = 0;
        if (c >= 2)
          out = y >= 2 ? static_cast<State>(y) : State(0);
        else if (y >= 2)
          out = (c == 1 && x <= 1) ? State(x == y - 2 ? 1 : 0) : State(0);
        else if (x <= 1)
          out = static_cast<State>(x);
        t[idx] = out;
      }
  return RuleTable(4, 1, std::move(t));
}

// The input word carrying bits u left of the center, a 1 at the center, and
// the marked copy of bits v on the right.
inline Word comparison_word(std::span<const State> u, std::span<const State> v) {
  if (u.size() != v.size() || u.empty())
    throw std::invalid_argument("comparison_word: sides must have equal nonzero length");
  Word w;
  w.reserve(2 * u.size() + 1);
  for (State b : u) {
    if (b > 1) throw std::invalid_argument("comparison_word: u must be bits");
    w.push_back(b);
  }
  w.push_back(1);
  for (State b : v) {
    if (b > 1) throw std::invalid_argument("comparison_word: v must be bits");
    w.push_back(static_cast<State>(b + 2));
  }
  return w;
}

// After n steps the center is 1 exactly when v read backwards equals u.
inline State comparison_expected(std::span<const State> u, std::span<const State> v) {
  if (u.size() != v.size() || u.empty())
    throw std::invalid_argument("comparison_expected: sides must have equal nonzero length");
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] != v[v.size() - 1 - i]) return 0;
  return 1;
}

}  // namespace cacc
