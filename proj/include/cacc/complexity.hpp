#pragma once
// The distinct-row measure behind one-way communication: d_n is the largest
// number of distinct rows or columns over all center matrices of f^n, and
// ceil(log2 d_n) bits decide f^n when the speaker holds the left half.
// Sequences d_1..d_N are classified as eventually bounded, eventually
// floor-linear, or other, from a trailing window of the data alone.

#include <bit>
#include <cmath>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cacc/matrices.hpp"

namespace cacc {

// Profiles of every center matrix of one iterated table.
struct CenterProfiles {
  std::vector<RowColProfile> per_center;

  std::size_t max_count() const {
    std::size_t d = 0;
    for (const auto& p : per_center)
      d = std::max({d, p.distinct_rows, p.distinct_cols});
    return d;
  }

  friend bool operator==(const CenterProfiles&, const CenterProfiles&) = default;
};

inline CenterProfiles center_profiles(const IteratedTable& t) {
  CenterProfiles cp;
  cp.per_center.reserve(t.states());
  for (int c = 0; c < t.states(); ++c)
    cp.per_center.push_back(center_profile(t, static_cast<State>(c)));
  return cp;
}

inline std::size_t d_n(const RuleTable& rule, int n, TabulateOptions opts = {}) {
  return center_profiles(tabulate(rule, n, opts)).max_count();
}

// Bits needed to name one of d row classes: ceil(log2 d).
inline int one_way_cc(std::size_t d) {
  if (d < 1) throw std::invalid_argument("one_way_cc: need d >= 1");
  return std::bit_width(d - 1);
}

struct ComplexitySequence {
  std::string rule_id;
  std::vector<std::size_t> values;  // values[k] = d_{k+1}
  int n_max() const { return static_cast<int>(values.size()); }
};

// d_1..d_n_max in one incremental pass over the iterated tables.
inline ComplexitySequence d_sequence(const RuleTable& rule, std::string rule_id,
                                     int n_max, TabulateOptions opts = {}) {
  if (n_max < 1) throw std::invalid_argument("d_sequence: need n_max >= 1");
  ComplexitySequence seq;
  seq.rule_id = std::move(rule_id);
  Tabulator tab(rule, opts);
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) tab.advance();
    seq.values.push_back(center_profiles(tab.table()).max_count());
  }
  return seq;
}

// Tail-window classification. A sequence is Bounded when the last tail_len
// values repeat with some period at most kTailPeriodLimit, Linear when some
// floor((a1_num*n + a0) / a1_den) matches the whole tail, Other otherwise
// (with a log-log growth hint). min_n leading levels are skipped as transient.
struct ClassifierParams {
  int tail_len = 9;
  int min_n = 3;
};

// Bounded sequences may keep oscillating; periods above 3 do not occur here.
inline constexpr int kTailPeriodLimit = 3;

struct ClassLabel {
  enum class Kind { bounded, linear, other };
  Kind kind = Kind::other;
  std::size_t bound = 0;                   // bounded: max value over the tail
  long long a1_num = 0, a1_den = 1;        // linear: slope as a reduced fraction
  long long a0 = 0;                        // linear: offset numerator over a1_den
  int n0 = 0;                              // linear: first n from which the fit holds
  double growth_hint = 0.0;                // other: log-log slope of the tail

  friend bool operator==(const ClassLabel&, const ClassLabel&) = default;
};

namespace detail {

inline long long floor_div(long long a, long long b) {
  // b > 0
  return a >= 0 ? a / b : -((-a + b - 1) / b);
}

}  // namespace detail

inline ClassLabel classify(const ComplexitySequence& seq, ClassifierParams params = {}) {
  if (params.tail_len < 2 || params.min_n < 0)
    throw std::invalid_argument("classify: bad parameters");
  const int n_max = seq.n_max();
  if (n_max < params.min_n + params.tail_len)
    throw std::invalid_argument("classify: sequence too short for tail window");
  const int t0 = n_max - params.tail_len + 1;  // tail covers t0..n_max
  const auto& v = seq.values;
  auto val = [&](int n) { return static_cast<long long>(v[n - 1]); };

  for (int p = 1; p <= kTailPeriodLimit && p < params.tail_len; ++p) {
    bool periodic = true;
    for (int n = t0; n + p <= n_max && periodic; ++n)
      periodic = val(n) == val(n + p);
    if (!periodic) continue;
    std::size_t b = 0;
    for (int n = t0; n <= n_max; ++n)
      b = std::max(b, static_cast<std::size_t>(val(n)));
    return ClassLabel{.kind = ClassLabel::Kind::bounded, .bound = b};
  }

  // Slope candidates: averaged differences over every sub-window of the tail.
  std::vector<std::pair<long long, long long>> cands;  // (den, num), reduced
  for (int k = 1; k < params.tail_len; ++k)
    for (int a = t0; a + k <= n_max; ++a) {
      const long long num = val(a + k) - val(a), den = k;
      if (num <= 0) continue;
      const long long g = std::gcd(num, den);
      cands.emplace_back(den / g, num / g);
    }
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());

  for (const auto& [den, num] : cands) {
    // Offsets that reproduce the first tail value: exactly den of them.
    const long long q_lo = den * val(t0) - num * t0;
    for (long long q = q_lo; q < q_lo + den; ++q) {
      bool ok = true;
      for (int n = t0; n <= n_max && ok; ++n)
        ok = val(n) == detail::floor_div(num * n + q, den);
      if (!ok) continue;
      int first = t0;
      while (first > 1 &&
             val(first - 1) == detail::floor_div(num * (first - 1) + q, den))
        --first;
      return ClassLabel{.kind = ClassLabel::Kind::linear, .a1_num = num,
                        .a1_den = den, .a0 = q, .n0 = first};
    }
  }

  const double hint = std::log(double(val(n_max)) / double(val(t0))) /
                      std::log(double(n_max) / double(t0));
  return ClassLabel{.kind = ClassLabel::Kind::other,
                    .growth_hint = std::round(hint * 1000.0) / 1000.0};
}

// Partition-matrix scan at one level: distinct-row counts and symmetric
// max(rows, cols) for every split point p = 1..2rn. Ties in the argmax go
// to the smaller p.
struct RnScan {
  int n = 0;
  std::vector<std::size_t> per_p_rows;  // index p-1: distinct rows of M_p
  std::vector<std::size_t> per_p;       // index p-1: max(rows, cols) of M_p
  std::size_t r_n_rows = 0;
  std::size_t r_n = 0;
  int argmax_p_rows = 0;
  int argmax_p = 0;

  friend bool operator==(const RnScan&, const RnScan&) = default;
};

inline RnScan r_n_scan_table(const IteratedTable& t) {
  RnScan scan;
  scan.n = t.n();
  const int p_max = 2 * t.side_length();
  for (int p = 1; p <= p_max; ++p) {
    const RowColProfile prof = partition_profile(t, p);
    scan.per_p_rows.push_back(prof.distinct_rows);
    scan.per_p.push_back(std::max(prof.distinct_rows, prof.distinct_cols));
    if (prof.distinct_rows > scan.r_n_rows) {
      scan.r_n_rows = prof.distinct_rows;
      scan.argmax_p_rows = p;
    }
    if (scan.per_p.back() > scan.r_n) {
      scan.r_n = scan.per_p.back();
      scan.argmax_p = p;
    }
  }
  return scan;
}

inline RnScan r_n_scan(const RuleTable& rule, int n, TabulateOptions opts = {}) {
  return r_n_scan_table(tabulate(rule, n, opts));
}

}  // namespace cacc
