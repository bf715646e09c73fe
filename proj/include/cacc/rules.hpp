#pragma once
// Local cellular automaton rules: lookup tables over neighborhoods of
// 2*radius+1 cells, Wolfram numbering for the 256 elementary rules, the two
// classical symmetries (space mirror, state complement), and the canonical
// representative set those symmetries induce.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "cacc/errors.hpp"

namespace cacc {

using State = std::uint8_t;

namespace detail {

inline std::size_t checked_mul(std::size_t a, std::size_t b) {
  if (b != 0 && a > std::numeric_limits<std::size_t>::max() / b)
    throw std::overflow_error("cacc: size computation overflows std::size_t");
  return a * b;
}

// base^exp with overflow detection.
inline std::size_t ipow(std::size_t base, int exp) {
  std::size_t v = 1;
  for (int i = 0; i < exp; ++i) v = checked_mul(v, base);
  return v;
}

inline std::uint64_t fnv1a(const unsigned char* data, std::size_t len,
                           std::uint64_t h = 1469598103934665603ull) {
  for (std::size_t i = 0; i < len; ++i) {
    h ^= data[i];
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace detail

// A local rule with s states and radius r. Neighborhood words are read
// left to right, the leftmost cell being the most significant base-s digit
// of the table index.
class RuleTable {
 public:
  RuleTable(int states, int radius, std::vector<State> table)
      : states_(states), radius_(radius), table_(std::move(table)) {
    if (states_ < 2) throw std::invalid_argument("rule: need at least 2 states");
    if (states_ > 255) throw std::invalid_argument("rule: at most 255 states");
    if (radius_ < 1) throw std::invalid_argument("rule: need radius >= 1");
    if (table_.size() != detail::ipow(states_, 2 * radius_ + 1))
      throw std::invalid_argument("rule: table length must be states^(2*radius+1)");
    for (State v : table_)
      if (v >= states_) throw std::invalid_argument("rule: table entry out of range");
  }

  int states() const { return states_; }
  int radius() const { return radius_; }
  int window() const { return 2 * radius_ + 1; }
  std::size_t size() const { return table_.size(); }
  std::span<const State> table() const { return table_; }
  State at(std::size_t idx) const { return table_[idx]; }

  // Applies the rule to a single neighborhood word.
  State operator()(std::span<const State> w) const {
    if (static_cast<int>(w.size()) != window())
      throw std::invalid_argument("rule: neighborhood word has wrong length");
    std::size_t idx = 0;
    for (State v : w) {
      if (v >= states_) throw std::invalid_argument("rule: cell state out of range");
      idx = idx * states_ + v;
    }
    return table_[idx];
  }

  // Stable content digest (FNV-1a over states, radius, table entries).
  std::uint64_t digest() const {
    unsigned char hdr[8] = {
        static_cast<unsigned char>(states_),
        static_cast<unsigned char>(states_ >> 8),
        static_cast<unsigned char>(states_ >> 16),
        static_cast<unsigned char>(states_ >> 24),
        static_cast<unsigned char>(radius_),
        static_cast<unsigned char>(radius_ >> 8),
        static_cast<unsigned char>(radius_ >> 16),
        static_cast<unsigned char>(radius_ >> 24),
    };
    std::uint64_t h = detail::fnv1a(hdr, sizeof hdr);
    return detail::fnv1a(table_.data(), table_.size(), h);
  }

  friend bool operator==(const RuleTable&, const RuleTable&) = default;

 private:
  int states_;
  int radius_;
  std::vector<State> table_;
};

// Elementary rules: s = 2, r = 1, code in [0, 256). Table index i encodes
// the neighborhood (a,b,c) as 4a+2b+c, and entry i is bit i of the code.
inline RuleTable eca_from_wolfram(int code) {
  if (code < 0 || code > 255)
    throw std::invalid_argument("eca: Wolfram code must be in [0, 256)");
  std::vector<State> t(8);
  for (int i = 0; i < 8; ++i) t[i] = static_cast<State>((code >> i) & 1);
  return RuleTable(2, 1, std::move(t));
}

inline int wolfram_code(const RuleTable& rule) {
  if (rule.states() != 2 || rule.radius() != 1)
    throw std::invalid_argument("wolfram_code: rule is not elementary");
  int code = 0;
  for (int i = 0; i < 8; ++i) code |= rule.at(i) << i;
  return code;
}

// Mirror in space: f'(w) = f(reverse(w)). Defined for any s, r.
inline RuleTable space_mirror(const RuleTable& rule) {
  const int s = rule.states();
  const int w = rule.window();
  std::vector<State> t(rule.size());
  for (std::size_t idx = 0; idx < t.size(); ++idx) {
    std::size_t rest = idx, rev = 0;
    for (int d = 0; d < w; ++d) {
      rev = rev * s + rest % s;  // reading digits right to left reverses them
      rest /= s;
    }
    t[idx] = rule.at(rev);
  }
  return RuleTable(s, rule.radius(), std::move(t));
}

// Complement of states: f''(w) = 1 - f(complement(w)). Binary rules only;
// complementing every cell of a word flips every digit of its index.
inline RuleTable state_complement(const RuleTable& rule) {
  if (rule.states() != 2)
    throw std::invalid_argument("state_complement: defined for 2 states only");
  const std::size_t mask = rule.size() - 1;
  std::vector<State> t(rule.size());
  for (std::size_t idx = 0; idx < t.size(); ++idx)
    t[idx] = static_cast<State>(1 - rule.at(mask - idx));
  return RuleTable(2, rule.radius(), std::move(t));
}

// Orbit of an elementary rule under mirror, complement and their
// composition. Size 1, 2 or 4; the canonical member is the smallest code.
struct SymmetryOrbit {
  std::vector<int> codes;  // sorted ascending
  int canonical = 0;
};

inline SymmetryOrbit orbit(int code) {
  const RuleTable f = eca_from_wolfram(code);
  const RuleTable m = space_mirror(f);
  const RuleTable c = state_complement(f);
  const RuleTable mc = state_complement(m);
  std::vector<int> codes = {code, wolfram_code(m), wolfram_code(c), wolfram_code(mc)};
  std::sort(codes.begin(), codes.end());
  codes.erase(std::unique(codes.begin(), codes.end()), codes.end());
  return SymmetryOrbit{.codes = codes, .canonical = codes.front()};
}

// The 88 canonical representatives: codes that are minimal in their orbit.
inline const std::vector<int>& representatives() {
  static const std::vector<int> reps = [] {
    std::vector<int> v;
    for (int code = 0; code < 256; ++code)
      if (orbit(code).canonical == code) v.push_back(code);
    return v;
  }();
  return reps;
}

}  // namespace cacc
