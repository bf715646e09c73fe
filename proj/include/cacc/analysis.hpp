#pragma once
// Orchestration: one incremental pass over the iterated tables of a rule
// collects the d sequence, classification and all detector data for a
// ResultRecord; a sweep runs every canonical representative. Profile counts
// round-trip through the persistent cache, and the bundled oracle checks
// compare every closed form against brute force.

#include <atomic>
#include <functional>
#include <thread>

#include "cacc/cache.hpp"
#include "cacc/records.hpp"

namespace cacc {

struct AnalyzeOptions {
  int n_max = 12;
  bool detectors = true;        // additivity, sensibility, nilpotency
  bool classify = true;         // requires n_max >= min_n + tail_len
  std::vector<int> rn_scan_levels;
  ClassifierParams classifier{};
  TabulateOptions tabulate{};
  ProfileCache* cache = nullptr;
  bool verify_cache = false;
};

// Full analysis of one rule. With a warm cache and detectors disabled the
// iterated tables are never built.
inline ResultRecord analyze_rule(const RuleDescriptor& desc, const AnalyzeOptions& opts) {
  if (opts.n_max < 1) throw std::invalid_argument("analyze: need n_max >= 1");
  const RuleTable rule = rule_from(desc);
  const std::uint64_t digest = rule.digest();

  ResultRecord rec;
  rec.rule = desc;
  rec.digest = digest_hex(digest);
  rec.n_max = opts.n_max;

  std::vector<std::optional<CenterProfiles>> profiles(opts.n_max + 1);
  bool all_cached = opts.cache != nullptr;
  if (opts.cache)
    for (int n = 1; n <= opts.n_max; ++n) {
      profiles[n] = opts.cache->load(digest, n, rule.states());
      if (!profiles[n]) all_cached = false;
    }

  const bool need_tables =
      opts.detectors || !all_cached || opts.verify_cache || !opts.rn_scan_levels.empty();
  SensibilityReport sens;
  NilpotencyReport nilp;
  nilp.n_max = opts.n_max;
  if (need_tables) {
    Tabulator tab(rule, opts.tabulate);
    for (int n = 1; n <= opts.n_max; ++n) {
      if (n > 1) tab.advance();
      const IteratedTable& t = tab.table();
      if (!profiles[n] || opts.verify_cache) {
        CenterProfiles cp = center_profiles(t);
        if (profiles[n] && opts.verify_cache && !(cp == *profiles[n]))
          throw std::runtime_error("cache mismatch for rule " + descriptor_id(desc) +
                                   " at n = " + std::to_string(n) +
                                   " (recomputation disagrees with cached profiles)");
        if (opts.cache && !profiles[n]) opts.cache->store(digest, n, cp);
        profiles[n] = std::move(cp);
      }
      if (opts.detectors) {
        sens.levels.push_back(sensibility_level(t));
        State v = 0;
        if (!nilp.constant_from && t.constant(&v)) {
          nilp.constant_from = n;
          nilp.value = v;
        }
      }
      for (int level : opts.rn_scan_levels)
        if (level == n) rec.rn_scans.push_back(r_n_scan_table(t));
    }
  }

  for (int n = 1; n <= opts.n_max; ++n) rec.d.push_back(profiles[n]->max_count());

  if (opts.classify) {
    ComplexitySequence seq;
    seq.rule_id = descriptor_id(desc);
    seq.values = rec.d;
    rec.label = classify(seq, opts.classifier);
  }
  if (opts.detectors) {
    rec.additive_checked = true;
    rec.additive = detect_additivity(rule);
    apply_sensibility_flags(sens);
    rec.sensibility = SensibilitySummary::from_report(sens);
    rec.nilpotency = nilp;
  }
  return rec;
}

// Analysis of every canonical representative, ordered by code. `jobs`
// worker threads split the rules; each rule touches only its own cache file.
inline std::vector<ResultRecord> classify_all(const AnalyzeOptions& opts, int jobs = 1) {
  const auto& reps = representatives();
  std::vector<ResultRecord> records(reps.size());
  std::vector<std::string> errors(reps.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < reps.size(); i = next.fetch_add(1)) {
      try {
        records[i] = analyze_rule(eca_descriptor(reps[i]), opts);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < reps.size(); ++i)
    if (!errors[i].empty())
      throw std::runtime_error("rule " + std::to_string(reps[i]) + ": " + errors[i]);
  return records;
}

// ---- oracle checks -----------------------------------------------------------

struct OracleCheck {
  std::string name;
  bool pass = false;
  std::string detail;  // filled on failure
};

namespace detail {

inline void check(std::vector<OracleCheck>& out, const std::string& name,
                  const std::function<std::string()>& body) {
  OracleCheck c;
  c.name = name;
  try {
    c.detail = body();  // empty string = pass
    c.pass = c.detail.empty();
  } catch (const std::exception& e) {
    c.pass = false;
    c.detail = e.what();
  }
  out.push_back(std::move(c));
}

inline Word word_from_index(std::size_t idx, int s, int len) {
  Word w(len);
  for (int i = len - 1; i >= 0; --i) {
    w[i] = static_cast<State>(idx % s);
    idx /= s;
  }
  return w;
}

}  // namespace detail

// Every closed form against brute force, at the depths the formulas are
// stated for. `filter` selects by name prefix; empty runs everything.
inline std::vector<OracleCheck> run_oracle_checks(const std::string& filter = "",
                                                  TabulateOptions opts = {}) {
  std::vector<OracleCheck> out;
  auto want = [&](const std::string& name) {
    return filter.empty() || name.rfind(filter, 0) == 0;
  };

  if (want("rule132")) {
    detail::check(out, "rule132.dn", [&] {
      Tabulator tab(eca_from_wolfram(132), opts);
      for (int n = 1; n <= 10; ++n) {
        if (n > 1) tab.advance();
        const std::size_t got = center_profiles(tab.table()).max_count();
        if (got != rule132_dn(n))
          return "n=" + std::to_string(n) + ": d=" + std::to_string(got) +
                 ", formula says " + std::to_string(rule132_dn(n));
      }
      return std::string();
    });
    detail::check(out, "rule132.center-rows", [&] {
      Tabulator tab(eca_from_wolfram(132), opts);
      for (int n = 1; n <= 10; ++n) {
        if (n > 1) tab.advance();
        for (State c = 0; c < 2; ++c) {
          const std::size_t got = center_profile(tab.table(), c).distinct_rows;
          if (got != rule132_center_rows(n, c))
            return "n=" + std::to_string(n) + " c=" + std::to_string(int(c)) +
                   ": rows=" + std::to_string(got);
        }
      }
      return std::string();
    });
    detail::check(out, "rule132.identity-submatrix", [&] {
      Tabulator tab(eca_from_wolfram(132), opts);
      for (int n = 1; n <= 10; ++n) {
        if (n > 1) tab.advance();
        const StateMatrix m = build_center_matrix(tab.table(), 1);
        for (int k = 0; k <= n; ++k)
          for (int l = 0; l <= n; ++l)
            if (m(rule132_run_index(n, k), rule132_run_index(n, l)) != (k == l))
              return "n=" + std::to_string(n) + ": entry (" + std::to_string(k) +
                     "," + std::to_string(l) + ") breaks the identity";
      }
      return std::string();
    });
  }

  if (want("rule23")) {
    detail::check(out, "rule23.dn", [&] {
      Tabulator tab(eca_from_wolfram(23), opts);
      for (int n = 1; n <= 10; ++n) {
        if (n > 1) tab.advance();
        const std::size_t got = center_profiles(tab.table()).max_count();
        if (got != rule23_dn(n))
          return "n=" + std::to_string(n) + ": d=" + std::to_string(got);
      }
      return std::string();
    });
  }

  if (want("rule105")) {
    detail::check(out, "rule105.formula", [&] {
      const RuleTable rule = eca_from_wolfram(105);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int c = 0; c < 2; ++c) {
            const State w[3] = {State(a), State(b), State(c)};
            if (rule(w) != rule105_formula(State(a), State(b), State(c)))
              return std::string("table disagrees with the parity form");
          }
      return std::string();
    });
    detail::check(out, "rule105.protocol", [&] {
      const RuleTable rule = eca_from_wolfram(105);
      const auto witness = detect_additivity(rule);
      if (!witness) return std::string("no additivity witness found");
      Tabulator tab(rule, opts);
      for (int n = 1; n <= 8; ++n) {
        if (n > 1) tab.advance();
        const IteratedTable& t = tab.table();
        for (std::size_t idx = 0; idx < t.size(); ++idx) {
          const Word w = detail::word_from_index(idx, 2, 2 * n + 1);
          const std::span<const State> ws(w);
          const State got = additive_protocol_eval(rule, *witness, ws.first(n),
                                                   w[n], ws.last(n));
          if (got != t.at(idx))
            return "n=" + std::to_string(n) + " idx=" + std::to_string(idx) +
                   ": protocol=" + std::to_string(int(got)) +
                   " table=" + std::to_string(int(t.at(idx)));
        }
      }
      return std::string();
    });
  }

  if (want("three-state")) {
    detail::check(out, "three-state.predict", [&] {
      const RuleTable rule = three_state_rule();
      Tabulator tab(rule, opts);
      for (int n = 1; n <= 5; ++n) {
        if (n > 1) tab.advance();
        const IteratedTable& t = tab.table();
        for (std::size_t idx = 0; idx < t.size(); ++idx) {
          const Word w = detail::word_from_index(idx, 3, 2 * n + 1);
          const State got =
              three_state_predict(w[n], three_state_context(w, n), n);
          if (got != t.at(idx))
            return "n=" + std::to_string(n) + " idx=" + std::to_string(idx) +
                   ": predicted " + std::to_string(int(got)) + ", table has " +
                   std::to_string(int(t.at(idx)));
        }
      }
      return std::string();
    });
    detail::check(out, "three-state.dn-bounds", [&] {
      Tabulator tab(three_state_rule(), opts);
      for (int n = 1; n <= 5; ++n) {
        if (n > 1) tab.advance();
        const std::size_t d = center_profiles(tab.table()).max_count();
        const auto b = three_state_dn_bounds(n);
        if (d < b.lower || d > b.upper)
          return "n=" + std::to_string(n) + ": d=" + std::to_string(d) +
                 " outside [" + std::to_string(b.lower) + ", " +
                 std::to_string(b.upper) + "]";
      }
      return std::string();
    });
  }

  if (want("comparison")) {
    detail::check(out, "comparison.expected", [&] {
      const RuleTable rule = comparison_rule();
      Tabulator tab(rule, opts);
      for (int n = 1; n <= 4; ++n) {
        if (n > 1) tab.advance();
        const std::size_t side = detail::ipow(2, n);
        for (std::size_t ui = 0; ui < side; ++ui)
          for (std::size_t vi = 0; vi < side; ++vi) {
            const Word u = detail::word_from_index(ui, 2, n);
            const Word v = detail::word_from_index(vi, 2, n);
            const Word w = comparison_word(u, v);
            if (eval(tab.table(), w) != comparison_expected(u, v))
              return "n=" + std::to_string(n) + " u=" + std::to_string(ui) +
                     " v=" + std::to_string(vi) + ": evolution disagrees";
          }
      }
      return std::string();
    });
    detail::check(out, "comparison.rows", [&] {
      Tabulator tab(comparison_rule(), opts);
      for (int n = 1; n <= 5; ++n) {
        if (n > 1) tab.advance();
        const std::size_t rows = center_profile(tab.table(), 1).distinct_rows;
        if (rows < detail::ipow(2, n))
          return "n=" + std::to_string(n) + ": only " + std::to_string(rows) +
                 " distinct rows in M_1";
      }
      return std::string();
    });
    detail::check(out, "comparison.unique-one", [&] {
      const RuleTable rule = comparison_rule();
      Tabulator tab(rule, opts);
      for (int n = 1; n <= 4; ++n) {
        if (n > 1) tab.advance();
        const std::size_t side = detail::ipow(2, n);
        for (std::size_t ui = 0; ui < side; ++ui) {
          const Word u = detail::word_from_index(ui, 2, n);
          int ones = 0;
          std::size_t hit = side;
          for (std::size_t vi = 0; vi < side; ++vi) {
            const Word v = detail::word_from_index(vi, 2, n);
            if (eval(tab.table(), comparison_word(u, v)) == 1) {
              ++ones;
              hit = vi;
            }
          }
          if (ones != 1)
            return "n=" + std::to_string(n) + " u=" + std::to_string(ui) + ": " +
                   std::to_string(ones) + " ones in the row";
          const Word v = detail::word_from_index(hit, 2, n);
          if (comparison_expected(u, v) != 1)
            return "n=" + std::to_string(n) + " u=" + std::to_string(ui) +
                   ": the single 1 sits at the wrong column";
        }
      }
      return std::string();
    });
  }

  return out;
}

}  // namespace cacc
