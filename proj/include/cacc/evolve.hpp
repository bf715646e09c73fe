#pragma once
// Iterated application of a local rule. tabulate(rule, n) materializes the
// full lookup table of f^n over words of 2*r*n+1 cells; binary tables are
// bit-packed so the largest elementary case (n = 12, 2^25 entries) costs
// 4 MiB. Levels are built incrementally: each entry of level k+1 combines
// 2r+1 overlapping lookups into level k.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cacc/rules.hpp"

namespace cacc {

using Word = std::vector<State>;

struct TabulateOptions {
  // Ceiling for the two levels kept alive during construction.
  std::size_t memory_budget = std::size_t(512) << 20;
};

namespace detail {

// Flat array of states, bit-packed when s == 2.
class StateArray {
 public:
  StateArray() = default;
  StateArray(int states, std::size_t size) : states_(states), size_(size) {
    if (states_ == 2)
      bits_.assign((size_ + 63) / 64, 0);
    else
      bytes_.assign(size_, 0);
  }

  int states() const { return states_; }
  std::size_t size() const { return size_; }
  bool packed() const { return states_ == 2; }

  State get(std::size_t i) const {
    return packed() ? static_cast<State>((bits_[i >> 6] >> (i & 63)) & 1)
                    : bytes_[i];
  }

  void set(std::size_t i, State v) {
    if (packed()) {
      const std::uint64_t bit = std::uint64_t(1) << (i & 63);
      if (v)
        bits_[i >> 6] |= bit;
      else
        bits_[i >> 6] &= ~bit;
    } else {
      bytes_[i] = v;
    }
  }

  std::span<const std::uint64_t> words() const { return bits_; }
  std::span<std::uint64_t> words() { return bits_; }
  std::span<const State> bytes() const { return bytes_; }

  static std::size_t storage_bytes(int states, std::size_t size) {
    return states == 2 ? (size + 63) / 64 * 8 : size;
  }

 private:
  int states_ = 2;
  std::size_t size_ = 0;
  std::vector<std::uint64_t> bits_;
  std::vector<State> bytes_;
};

inline unsigned word_bit(std::span<const std::uint64_t> w, std::size_t i) {
  return static_cast<unsigned>((w[i >> 6] >> (i & 63)) & 1);
}

}  // namespace detail

// The tabulated function f^n over words of 2*r*n+1 cells, indexed with the
// leftmost cell as the most significant base-s digit.
class IteratedTable {
 public:
  IteratedTable(int states, int radius, int n, detail::StateArray entries)
      : states_(states), radius_(radius), n_(n), entries_(std::move(entries)) {}

  int states() const { return states_; }
  int radius() const { return radius_; }
  int n() const { return n_; }
  int word_length() const { return 2 * radius_ * n_ + 1; }
  int side_length() const { return radius_ * n_; }
  std::size_t size() const { return entries_.size(); }
  State at(std::size_t idx) const { return entries_.get(idx); }
  const detail::StateArray& entries() const { return entries_; }

  // True when every entry equals the same state (reported through `value`).
  bool constant(State* value = nullptr) const {
    State v0 = entries_.get(0);
    if (entries_.packed()) {
      const auto w = entries_.words();
      const std::size_t full = entries_.size() / 64;
      const std::uint64_t want = v0 ? ~std::uint64_t(0) : 0;
      for (std::size_t i = 0; i < full; ++i)
        if (w[i] != want) return false;
      if (const std::size_t rem = entries_.size() % 64) {
        const std::uint64_t mask = (std::uint64_t(1) << rem) - 1;
        if ((w[full] & mask) != (want & mask)) return false;
      }
    } else {
      for (std::size_t i = 1; i < entries_.size(); ++i)
        if (entries_.get(i) != v0) return false;
    }
    if (value) *value = v0;
    return true;
  }

 private:
  int states_;
  int radius_;
  int n_;
  detail::StateArray entries_;
};

namespace detail {

inline void check_budget(int states, std::size_t cur, std::size_t next,
                         const TabulateOptions& opts, int level) {
  const std::size_t need = StateArray::storage_bytes(states, cur) +
                           StateArray::storage_bytes(states, next);
  if (need > opts.memory_budget)
    throw resource_error("tabulate: level " + std::to_string(level) + " needs " +
                         std::to_string(need >> 20) + " MiB, budget is " +
                         std::to_string(opts.memory_budget >> 20) + " MiB");
}

}  // namespace detail

// Builds f^1, f^2, ... one level at a time so every intermediate table can
// be inspected before the next one replaces it.
class Tabulator {
 public:
  explicit Tabulator(RuleTable rule, TabulateOptions opts = {})
      : rule_(std::move(rule)), opts_(opts), table_(make_level1(rule_, opts_)) {}

  const RuleTable& rule() const { return rule_; }
  int level() const { return table_.n(); }
  const IteratedTable& table() const { return table_; }

  // Replaces the level-k table by level k+1.
  void advance() {
    const int s = rule_.states();
    const int r = rule_.radius();
    const std::size_t cur_size = table_.size();
    const std::size_t step = detail::ipow(s, 2 * r);
    const std::size_t next_size = detail::checked_mul(cur_size, step);
    detail::check_budget(s, cur_size, next_size, opts_, table_.n() + 1);

    detail::StateArray next(s, next_size);
    if (s == 2 && r == 1)
      advance_binary_r1(next);
    else if (s == 2)
      advance_binary(next, r);
    else
      advance_generic(next, s, r);
    table_ = IteratedTable(s, r, table_.n() + 1, std::move(next));
  }

 private:
  static IteratedTable make_level1(const RuleTable& rule, const TabulateOptions& opts) {
    detail::check_budget(rule.states(), 0, rule.size(), opts, 1);
    detail::StateArray a(rule.states(), rule.size());
    for (std::size_t i = 0; i < rule.size(); ++i) a.set(i, rule.at(i));
    return IteratedTable(rule.states(), rule.radius(), 1, std::move(a));
  }

  // Hot path: s = 2, r = 1. Entry idx of the next level is
  // rule[4*T(idx>>2 & m) + 2*T(idx>>1 & m) + T(idx & m)] with m masking the
  // current word length; output bits are flushed one 64-bit word at a time.
  void advance_binary_r1(detail::StateArray& next) const {
    const auto cw = table_.entries().words();
    const std::size_t mask = table_.size() - 1;
    unsigned code = 0;
    for (int i = 0; i < 8; ++i) code |= rule_.at(i) << i;
    auto nw = next.words();
    const std::size_t next_size = next.size();
    std::uint64_t acc = 0;
    for (std::size_t idx = 0; idx < next_size; ++idx) {
      const unsigned nb = (detail::word_bit(cw, (idx >> 2) & mask) << 2) |
                          (detail::word_bit(cw, (idx >> 1) & mask) << 1) |
                          detail::word_bit(cw, idx & mask);
      acc |= std::uint64_t((code >> nb) & 1) << (idx & 63);
      if ((idx & 63) == 63) {
        nw[idx >> 6] = acc;
        acc = 0;
      }
    }
    if (next_size & 63) nw[next_size >> 6] = acc;
  }

  void advance_binary(detail::StateArray& next, int r) const {
    const auto cw = table_.entries().words();
    const std::size_t mask = table_.size() - 1;
    std::vector<std::uint8_t> code(rule_.size());
    for (std::size_t i = 0; i < rule_.size(); ++i) code[i] = rule_.at(i);
    auto nw = next.words();
    const std::size_t next_size = next.size();
    std::uint64_t acc = 0;
    for (std::size_t idx = 0; idx < next_size; ++idx) {
      unsigned nb = 0;
      for (int d = 2 * r; d >= 0; --d)
        nb = (nb << 1) | detail::word_bit(cw, (idx >> d) & mask);
      acc |= std::uint64_t(code[nb]) << (idx & 63);
      if ((idx & 63) == 63) {
        nw[idx >> 6] = acc;
        acc = 0;
      }
    }
    if (next_size & 63) nw[next_size >> 6] = acc;
  }

  void advance_generic(detail::StateArray& next, int s, int r) const {
    const auto& cur = table_.entries();
    const std::size_t cur_size = table_.size();
    std::vector<std::size_t> div(2 * r + 1);  // div[d] = s^(2r-d)
    for (int d = 0; d <= 2 * r; ++d) div[d] = detail::ipow(s, 2 * r - d);
    const std::size_t next_size = next.size();
    for (std::size_t idx = 0; idx < next_size; ++idx) {
      std::size_t nb = 0;
      for (int d = 0; d <= 2 * r; ++d)
        nb = nb * s + cur.get(idx / div[d] % cur_size);
      next.set(idx, rule_.at(nb));
    }
  }

  RuleTable rule_;
  TabulateOptions opts_;
  IteratedTable table_;
};

inline IteratedTable tabulate(const RuleTable& rule, int n, TabulateOptions opts = {}) {
  if (n < 1) throw std::invalid_argument("tabulate: need n >= 1");
  Tabulator t(rule, opts);
  while (t.level() < n) t.advance();
  return t.table();
}

namespace detail {

inline void check_word(const RuleTable& rule, std::span<const State> w) {
  for (State v : w)
    if (v >= rule.states())
      throw std::invalid_argument("word: cell state out of range");
}

}  // namespace detail

// One synchronous update; the result is 2r cells shorter.
inline Word step(const RuleTable& rule, std::span<const State> w) {
  const int r = rule.radius();
  if (static_cast<int>(w.size()) < rule.window())
    throw std::invalid_argument("step: word shorter than one neighborhood");
  detail::check_word(rule, w);
  const int s = rule.states();
  const std::size_t head = detail::ipow(s, 2 * r);
  Word out(w.size() - 2 * r);
  std::size_t acc = 0;
  for (int i = 0; i < 2 * r; ++i) acc = acc * s + w[i];
  for (std::size_t j = 0; j < out.size(); ++j) {
    acc = acc % head * s + w[j + 2 * r];
    out[j] = rule.at(acc);
  }
  return out;
}

// Looks up f^n on a full-length word.
inline State eval(const IteratedTable& t, std::span<const State> w) {
  if (static_cast<int>(w.size()) != t.word_length())
    throw std::invalid_argument("eval: word length must be 2*r*n+1");
  std::size_t idx = 0;
  for (State v : w) {
    if (v >= t.states()) throw std::invalid_argument("eval: cell state out of range");
    idx = idx * t.states() + v;
  }
  return t.at(idx);
}

// Rows of the evolution triangle, starting at the initial word; row t has
// |w| - 2*r*t cells.
struct SpacetimeDiagram {
  std::vector<Word> rows;
};

inline SpacetimeDiagram spacetime(const RuleTable& rule, Word w, int steps) {
  if (steps < 0) throw std::invalid_argument("spacetime: need steps >= 0");
  if (static_cast<int>(w.size()) < 2 * rule.radius() * steps + 1)
    throw std::invalid_argument("spacetime: word too short for requested steps");
  detail::check_word(rule, w);
  SpacetimeDiagram d;
  d.rows.push_back(std::move(w));
  for (int t = 0; t < steps; ++t) d.rows.push_back(step(rule, d.rows.back()));
  return d;
}

}  // namespace cacc
