#pragma once
// Structural detectors on a rule: an exhaustive search for a pair of state
// operators making the rule additive (which collapses one-way communication
// to a single state), the essential-position scan behind sensibility, and a
// probe for iterates becoming constant.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cacc/evolve.hpp"

namespace cacc {

// Binary operator on the state alphabet, row-major table.
struct BinaryOp {
  int states = 2;
  std::vector<State> table;  // table[x*states + y]

  State apply(State x, State y) const { return table[std::size_t(x) * states + y]; }

  bool has_neutral(State e) const {
    for (int x = 0; x < states; ++x)
      if (apply(static_cast<State>(x), e) != x || apply(e, static_cast<State>(x)) != x)
        return false;
    return true;
  }

  std::string digits() const {
    std::string s;
    for (State v : table) s += static_cast<char>('0' + v);
    return s;
  }

  friend bool operator==(const BinaryOp&, const BinaryOp&) = default;
};

// f(u (+) u') = f(u) (*) f(u') and f(u (*) u') = f(u) (+) f(u'), with (+)
// having neutral element `neutral`, both equations over all neighborhood
// pairs applied cell by cell.
struct AdditivityWitness {
  BinaryOp oplus;
  BinaryOp otimes;
  State neutral = 0;

  friend bool operator==(const AdditivityWitness&, const AdditivityWitness&) = default;
};

namespace detail {

// digits_of[i*W + d] = d-th cell (from the left) of neighborhood word i.
inline std::vector<State> word_digits(int s, int W, std::size_t count) {
  std::vector<State> d(count * W);
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t rest = i;
    for (int k = W - 1; k >= 0; --k) {
      d[i * W + k] = static_cast<State>(rest % s);
      rest /= s;
    }
  }
  return d;
}

inline std::size_t combine_words(const std::vector<State>& dig, int s, int W,
                                 std::size_t i, std::size_t j, const BinaryOp& op) {
  std::size_t idx = 0;
  for (int d = 0; d < W; ++d)
    idx = idx * s + op.apply(dig[i * W + d], dig[j * W + d]);
  return idx;
}

}  // namespace detail

// Full check of both defining equations; used to re-verify found witnesses
// independently of the search shortcuts.
inline bool witness_satisfies(const RuleTable& rule, const AdditivityWitness& w) {
  const int s = rule.states();
  if (w.oplus.states != s || w.otimes.states != s) return false;
  if (!w.oplus.has_neutral(w.neutral)) return false;
  const int W = rule.window();
  const std::size_t S = rule.size();
  const auto dig = detail::word_digits(s, W, S);
  for (std::size_t i = 0; i < S; ++i)
    for (std::size_t j = 0; j < S; ++j) {
      const State fi = rule.at(i), fj = rule.at(j);
      if (rule.at(detail::combine_words(dig, s, W, i, j, w.oplus)) !=
          w.otimes.apply(fi, fj))
        return false;
      if (rule.at(detail::combine_words(dig, s, W, i, j, w.otimes)) !=
          w.oplus.apply(fi, fj))
        return false;
    }
  return true;
}

// Exhaustive search in canonical order: (+) tables lexicographically, then
// neutral elements ascending, then (*) tables lexicographically; the first
// success is returned. The first equation pins (*) on the range of f, so
// only the remaining cells are enumerated (in place, preserving the order).
inline std::optional<AdditivityWitness> detect_additivity(const RuleTable& rule) {
  const int s = rule.states();
  if (s > 3)
    throw resource_error("additivity: operator space s^(s*s) too large for s = " +
                         std::to_string(s) + " (supported up to 3 states)");
  const int W = rule.window();
  const std::size_t S = rule.size();
  const auto dig = detail::word_digits(s, W, S);
  const int cells = s * s;
  const std::size_t op_count = detail::ipow(s, cells);

  BinaryOp plus{.states = s, .table = std::vector<State>(cells)};
  BinaryOp times{.states = s, .table = std::vector<State>(cells)};
  std::vector<int> forced(cells);
  std::vector<int> free_cells;

  for (std::size_t pi = 0; pi < op_count; ++pi) {
    std::size_t rest = pi;
    for (int c = cells - 1; c >= 0; --c) {
      plus.table[c] = static_cast<State>(rest % s);
      rest /= s;
    }
    for (int e = 0; e < s; ++e) {
      if (!plus.has_neutral(static_cast<State>(e))) continue;

      // Equation 1 forces (*) at (f(u), f(u')).
      std::fill(forced.begin(), forced.end(), -1);
      bool consistent = true;
      for (std::size_t i = 0; i < S && consistent; ++i)
        for (std::size_t j = 0; j < S; ++j) {
          const State lhs = rule.at(detail::combine_words(dig, s, W, i, j, plus));
          const int cell = rule.at(i) * s + rule.at(j);
          if (forced[cell] < 0)
            forced[cell] = lhs;
          else if (forced[cell] != lhs) {
            consistent = false;
            break;
          }
        }
      if (!consistent) continue;

      free_cells.clear();
      for (int c = 0; c < cells; ++c)
        if (forced[c] < 0) free_cells.push_back(c);

      // Enumerate completions lexicographically (earlier cells weigh more).
      std::vector<State> fill(free_cells.size(), 0);
      for (;;) {
        for (int c = 0; c < cells; ++c)
          times.table[c] = forced[c] < 0 ? 0 : static_cast<State>(forced[c]);
        for (std::size_t k = 0; k < free_cells.size(); ++k)
          times.table[free_cells[k]] = fill[k];

        bool ok = true;
        for (std::size_t i = 0; i < S && ok; ++i)
          for (std::size_t j = 0; j < S; ++j)
            if (rule.at(detail::combine_words(dig, s, W, i, j, times)) !=
                plus.apply(rule.at(i), rule.at(j))) {
              ok = false;
              break;
            }
        if (ok) {
          AdditivityWitness w{.oplus = plus, .otimes = times,
                              .neutral = static_cast<State>(e)};
          if (witness_satisfies(rule, w)) return w;
        }

        int k = static_cast<int>(fill.size()) - 1;
        while (k >= 0 && fill[k] == s - 1) fill[k--] = 0;
        if (k < 0) break;
        ++fill[k];
      }
    }
  }
  return std::nullopt;
}

// Two-party evaluation of f^n through an additivity witness: the word splits
// cellwise as alice (+) bob with the center kept on alice's side, the unknown
// cells (and bob's center) holding the neutral element. Each party iterates
// alone; the single exchanged state is combined with the operator matching
// the parity of n. u and v hold r*n cells each.
inline State additive_protocol_eval(const RuleTable& rule, const AdditivityWitness& w,
                                    std::span<const State> u, State c,
                                    std::span<const State> v) {
  if (!witness_satisfies(rule, w))
    throw std::invalid_argument("protocol: witness does not satisfy the equations");
  if (u.size() != v.size() || u.empty())
    throw std::invalid_argument("protocol: sides must have equal nonzero length");
  if (u.size() % rule.radius() != 0)
    throw std::invalid_argument("protocol: side length must be a multiple of the radius");
  if (c >= rule.states())
    throw std::invalid_argument("protocol: center state out of range");
  const int n = static_cast<int>(u.size()) / rule.radius();

  Word alice(u.begin(), u.end());
  alice.push_back(c);
  alice.insert(alice.end(), u.size(), w.neutral);
  Word bob(u.size() + 1, w.neutral);
  bob.insert(bob.end(), v.begin(), v.end());
  for (int t = 0; t < n; ++t) {
    alice = step(rule, alice);
    bob = step(rule, bob);
  }
  return n % 2 == 0 ? w.oplus.apply(alice[0], bob[0])
                    : w.otimes.apply(alice[0], bob[0]);
}

namespace detail {

// Does f^n ever change when cell `bit` (counted from the least significant
// end of the index) flips? Word-aligned compare for high bits, shifted
// self-xor under a position mask for bits inside one 64-bit word.
inline bool essential_bit(std::span<const std::uint64_t> w, std::size_t size, int bit) {
  if (bit >= 6) {
    const std::size_t stride = std::size_t(1) << (bit - 6);
    const std::size_t nwords = (size + 63) / 64;
    for (std::size_t base = 0; base < nwords; base += 2 * stride)
      for (std::size_t off = 0; off < stride; ++off)
        if (w[base + off] != w[base + off + stride]) return true;
    return false;
  }
  static constexpr std::uint64_t kLowHalf[6] = {
      0x5555555555555555ull, 0x3333333333333333ull, 0x0f0f0f0f0f0f0f0full,
      0x00ff00ff00ff00ffull, 0x0000ffff0000ffffull, 0x00000000ffffffffull,
  };
  const int k = 1 << bit;
  for (std::uint64_t v : w)
    if ((v ^ (v >> k)) & kLowHalf[bit]) return true;
  return false;
}

}  // namespace detail

// 1-based positions of cells f^n genuinely depends on.
inline std::vector<int> essential_positions(const IteratedTable& t) {
  const int L = t.word_length();
  std::vector<int> out;
  if (t.states() == 2) {
    for (int pos = 1; pos <= L; ++pos)
      if (detail::essential_bit(t.entries().words(), t.size(), L - pos))
        out.push_back(pos);
    return out;
  }
  const int s = t.states();
  for (int pos = 1; pos <= L; ++pos) {
    const std::size_t stride = detail::ipow(s, L - pos);
    const std::size_t blocks = t.size() / (stride * s);
    bool essential = false;
    for (std::size_t hi = 0; hi < blocks && !essential; ++hi)
      for (std::size_t lo = 0; lo < stride && !essential; ++lo) {
        const std::size_t idx = hi * stride * s + lo;
        const State v0 = t.at(idx);
        for (int q = 1; q < s; ++q)
          if (t.at(idx + q * stride) != v0) {
            essential = true;
            break;
          }
      }
    if (essential) out.push_back(pos);
  }
  return out;
}

// Per-level essential positions split around the center cell (the center
// belongs to neither half), plus window flags over the trailing levels:
// `limited` when the total count settles into a cycle of period at most 3,
// `half_limited` when the smaller of the two half-counts does (a limited
// rule is half-limited by definition).
struct SensibilityLevel {
  int n = 0;
  std::vector<int> essential;
  int left = 0;
  int right = 0;
  int total = 0;
  bool center = false;

  friend bool operator==(const SensibilityLevel&, const SensibilityLevel&) = default;
};

struct SensibilityReport {
  std::vector<SensibilityLevel> levels;  // levels[k] is n = k+1
  int window = 6;
  bool limited = false;
  bool half_limited = false;

  friend bool operator==(const SensibilityReport&, const SensibilityReport&) = default;
};

inline SensibilityLevel sensibility_level(const IteratedTable& t) {
  SensibilityLevel lv;
  lv.n = t.n();
  lv.essential = essential_positions(t);
  const int center = t.side_length() + 1;
  for (int pos : lv.essential) {
    if (pos < center)
      ++lv.left;
    else if (pos > center)
      ++lv.right;
    else
      lv.center = true;
  }
  lv.total = static_cast<int>(lv.essential.size());
  return lv;
}

inline void apply_sensibility_flags(SensibilityReport& r) {
  if (r.levels.empty()) return;
  const std::size_t w = std::min<std::size_t>(r.window, r.levels.size());
  const std::size_t first = r.levels.size() - w;
  auto steady = [&](auto&& measure) {
    if (w <= 1) return true;
    for (std::size_t p = 1; p <= 3 && p < w; ++p) {
      bool periodic = true;
      for (std::size_t k = first; k + p < r.levels.size() && periodic; ++k)
        periodic = measure(r.levels[k]) == measure(r.levels[k + p]);
      if (periodic) return true;
    }
    return false;
  };
  r.limited = steady([](const SensibilityLevel& lv) { return lv.total; });
  r.half_limited =
      r.limited ||
      steady([](const SensibilityLevel& lv) { return std::min(lv.left, lv.right); });
}

inline SensibilityReport sensibility_report(const RuleTable& rule, int n_max,
                                            TabulateOptions opts = {}) {
  if (n_max < 1) throw std::invalid_argument("sensibility: need n_max >= 1");
  SensibilityReport rep;
  Tabulator tab(rule, opts);
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) tab.advance();
    rep.levels.push_back(sensibility_level(tab.table()));
  }
  apply_sensibility_flags(rep);
  return rep;
}

// Checks each iterate for being a constant function. Once one level is
// constant every later level is too, so the first hit is reported.
struct NilpotencyReport {
  int n_max = 0;
  std::optional<int> constant_from;
  State value = 0;  // the constant at that level, when present

  friend bool operator==(const NilpotencyReport&, const NilpotencyReport&) = default;
};

inline NilpotencyReport nilpotency_probe(const RuleTable& rule, int n_max,
                                         TabulateOptions opts = {}) {
  if (n_max < 1) throw std::invalid_argument("nilpotency: need n_max >= 1");
  NilpotencyReport rep;
  rep.n_max = n_max;
  Tabulator tab(rule, opts);
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) tab.advance();
    State v = 0;
    if (tab.table().constant(&v)) {
      rep.constant_from = n;
      rep.value = v;
      return rep;
    }
  }
  return rep;
}

}  // namespace cacc
