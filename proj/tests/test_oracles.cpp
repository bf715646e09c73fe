#include <span>
#include <string>

#include <catch2/catch_amalgamated.hpp>

#include "cacc/analysis.hpp"
#include "cacc/complexity.hpp"
#include "cacc/oracles.hpp"

using namespace cacc;

TEST_CASE("block-count formulas for rules 132 and 23") {
  for (int n = 1; n <= 10; ++n) {
    CHECK(rule132_dn(n) == std::size_t(n) + 1);
    CHECK(rule23_dn(n) == std::size_t(n) + 1);
  }
  for (int n = 1; n <= 6; ++n) {
    CHECK(d_n(eca_from_wolfram(132), n) == rule132_dn(n));
    CHECK(d_n(eca_from_wolfram(23), n) == rule23_dn(n));
  }
  CHECK_THROWS_AS(rule132_dn(0), std::invalid_argument);
  CHECK_THROWS_AS(rule23_dn(0), std::invalid_argument);
}

TEST_CASE("rule 132 row counts split by the center state") {
  for (int n = 1; n <= 8; ++n) {
    CHECK(rule132_center_rows(n, 0) == 1);
    CHECK(rule132_center_rows(n, 1) == std::size_t(n) + 1);
  }
  CHECK_THROWS_AS(rule132_center_rows(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(rule132_center_rows(3, 2), std::invalid_argument);
}

TEST_CASE("run index packs k ones against the center") {
  CHECK(rule132_run_index(1, 0) == 0);
  CHECK(rule132_run_index(1, 1) == 1);
  CHECK(rule132_run_index(3, 0) == 0);  // 000
  CHECK(rule132_run_index(3, 1) == 4);  // 100
  CHECK(rule132_run_index(3, 2) == 6);  // 110
  CHECK(rule132_run_index(3, 3) == 7);  // 111
  CHECK_THROWS_AS(rule132_run_index(3, -1), std::invalid_argument);
  CHECK_THROWS_AS(rule132_run_index(3, 4), std::invalid_argument);
}

TEST_CASE("rule 105 is complemented parity") {
  const RuleTable rule = eca_from_wolfram(105);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        CHECK(rule105_formula(State(a), State(b), State(c)) ==
              rule.at(std::size_t(a * 4 + b * 2 + c)));
  CHECK_THROWS_AS(rule105_formula(2, 0, 0), std::invalid_argument);
}

TEST_CASE("three-state rule entries") {
  const RuleTable rule = three_state_rule();
  auto f = [&](int i, int j, int k) { return int(rule.at(std::size_t(i * 9 + j * 3 + k))); };
  for (int a = 0; a < 3; ++a) CHECK(f(a, a, a) == a);  // quiescent states
  CHECK(f(1, 0, 1) == 0);   // zero survives between equal neighbors
  CHECK(f(2, 0, 2) == 0);
  CHECK(f(1, 0, 2) == 2);   // unequal neighbors kill the zero
  CHECK(f(2, 0, 0) == 2);
  CHECK(f(0, 1, 0) == 1);   // ones spread over zeros
  CHECK(f(2, 1, 0) == 2);   // twos beat everything
  CHECK(f(0, 0, 1) == 1);
}

TEST_CASE("front distances from a word") {
  const Word a{0, 1, 0, 0, 0, 0, 2};  // n = 3, center at index 3
  const ThreeStateContext ca = three_state_context(a, 3);
  CHECK(ca.l1 == 2);
  CHECK(ca.l2 == ThreeStateContext::kFar);
  CHECK(ca.r1 == ThreeStateContext::kFar);
  CHECK(ca.r2 == 3);

  // a 1 sitting behind a nearer 2 is ignored
  const Word b{1, 2, 0, 0, 0, 0, 0};
  const ThreeStateContext cb = three_state_context(b, 3);
  CHECK(cb.l1 == ThreeStateContext::kFar);
  CHECK(cb.l2 == 2);
  CHECK(cb.r1 == ThreeStateContext::kFar);
  CHECK(cb.r2 == ThreeStateContext::kFar);

  const Word all_far{0, 0, 0, 0, 0};
  CHECK(three_state_context(all_far, 2) == ThreeStateContext{});

  CHECK_THROWS_AS(three_state_context(all_far, 3), std::invalid_argument);
}

TEST_CASE("center prediction from front distances") {
  constexpr int kFar = ThreeStateContext::kFar;
  auto ctx = [](int l1, int l2, int r1, int r2) {
    return ThreeStateContext{.l1 = l1, .l2 = l2, .r1 = r1, .r2 = r2};
  };

  CHECK(three_state_predict(2, ctx(1, 2, 1, 2), 5) == 2);
  CHECK(three_state_predict(1, ctx(kFar, kFar, kFar, kFar), 5) == 1);
  CHECK(three_state_predict(1, ctx(kFar, 3, kFar, kFar), 5) == 2);
  CHECK(three_state_predict(1, ctx(kFar, 3, kFar, kFar), 2) == 1);
  // symmetric fronts leave the zero alone
  CHECK(three_state_predict(0, ctx(kFar, 3, kFar, 3), 5) == 0);
  CHECK(three_state_predict(0, ctx(1, kFar, 1, kFar), 5) == 0);
  // an asymmetric 1 flips the center, an asymmetric 2 overruns it
  CHECK(three_state_predict(0, ctx(1, kFar, kFar, kFar), 3) == 1);
  CHECK(three_state_predict(0, ctx(kFar, 1, kFar, kFar), 2) == 2);
  // asymmetric ones followed by symmetric in-range twos
  CHECK(three_state_predict(0, ctx(1, 2, kFar, 2), 3) == 2);

  CHECK_THROWS_AS(three_state_predict(3, ctx(1, 2, 1, 2), 3),
                  std::invalid_argument);
}

TEST_CASE("prediction matches the iterated table") {
  const RuleTable rule = three_state_rule();
  for (int n = 1; n <= 3; ++n) {
    const IteratedTable t = tabulate(rule, n);
    for (std::size_t idx = 0; idx < t.size(); ++idx) {
      Word w(2 * n + 1);
      std::size_t rest = idx;
      for (int i = 2 * n; i >= 0; --i) {
        w[i] = static_cast<State>(rest % 3);
        rest /= 3;
      }
      INFO("n=" << n << " idx=" << idx);
      CHECK(three_state_predict(w[n], three_state_context(w, n), n) == t.at(idx));
    }
  }
}

TEST_CASE("three-state count bounds") {
  CHECK(three_state_dn_bounds(1).lower == 3);
  CHECK(three_state_dn_bounds(1).upper == 16);
  CHECK(three_state_dn_bounds(3).lower == 10);
  CHECK(three_state_dn_bounds(3).upper == 64);
  CHECK(three_state_dn_bounds(5).lower == 21);
  CHECK(three_state_dn_bounds(5).upper == 144);
  CHECK_THROWS_AS(three_state_dn_bounds(0), std::invalid_argument);

  const RuleTable rule = three_state_rule();
  for (int n = 1; n <= 3; ++n) {
    const std::size_t d = d_n(rule, n);
    const ThreeStateBounds b = three_state_dn_bounds(n);
    CHECK(b.lower <= d);
    CHECK(d <= b.upper);
  }
}

TEST_CASE("comparison rule entries") {
  const RuleTable rule = comparison_rule();
  auto f = [&](int x, int c, int y) {
    return int(rule.at(std::size_t(x * 16 + c * 4 + y)));
  };
  CHECK(f(0, 3, 3) == 3);  // marked bits drift left over a marked center
  CHECK(f(1, 2, 3) == 3);
  CHECK(f(0, 2, 1) == 0);  // plain bits die under a marked center
  CHECK(f(1, 0, 1) == 1);  // plain bits drift right
  CHECK(f(0, 0, 3) == 0);
  CHECK(f(1, 1, 3) == 1);  // center 1 keeps matching pairs alive
  CHECK(f(0, 1, 2) == 1);
  CHECK(f(0, 1, 3) == 0);  // mismatched pair
  CHECK(f(1, 1, 2) == 0);
  CHECK(f(3, 0, 1) == 0);  // marked bits never drift right
}

TEST_CASE("comparison word layout") {
  const Word u{0, 1}, v{1, 0};
  CHECK(comparison_word(u, v) == Word{0, 1, 1, 3, 2});
  CHECK(comparison_word(Word{1}, Word{1}) == Word{1, 1, 3});

  CHECK_THROWS_AS(comparison_word(Word{0, 1}, Word{0}), std::invalid_argument);
  CHECK_THROWS_AS(comparison_word(Word{}, Word{}), std::invalid_argument);
  CHECK_THROWS_AS(comparison_word(Word{2}, Word{0}), std::invalid_argument);
}

TEST_CASE("comparison acceptance is a reverse match") {
  CHECK(comparison_expected(Word{0}, Word{0}) == 1);
  CHECK(comparison_expected(Word{0}, Word{1}) == 0);
  CHECK(comparison_expected(Word{0, 1}, Word{1, 0}) == 1);
  CHECK(comparison_expected(Word{0, 1}, Word{0, 1}) == 0);
  CHECK(comparison_expected(Word{1, 1}, Word{1, 1}) == 1);
  CHECK_THROWS_AS(comparison_expected(Word{0}, Word{0, 1}), std::invalid_argument);
}

TEST_CASE("comparison simulation reaches the expected center") {
  const RuleTable rule = comparison_rule();
  for (int n = 1; n <= 3; ++n) {
    for (std::size_t um = 0; um < (std::size_t(1) << n); ++um)
      for (std::size_t vm = 0; vm < (std::size_t(1) << n); ++vm) {
        Word u(n), v(n);
        for (int i = 0; i < n; ++i) {
          u[i] = static_cast<State>((um >> (n - 1 - i)) & 1);
          v[i] = static_cast<State>((vm >> (n - 1 - i)) & 1);
        }
        Word w = comparison_word(u, v);
        for (int t = 0; t < n; ++t) w = step(rule, w);
        REQUIRE(w.size() == 1);
        INFO("n=" << n << " u=" << um << " v=" << vm);
        CHECK(w[0] == comparison_expected(u, v));
      }
  }
}

TEST_CASE("oracle check registry") {
  const auto all = run_oracle_checks();
  CHECK(all.size() == 11);
  for (const OracleCheck& c : all) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.pass);
  }

  const auto some = run_oracle_checks("rule132");
  CHECK(some.size() == 3);
  for (const OracleCheck& c : some) CHECK(c.name.rfind("rule132", 0) == 0);

  CHECK(run_oracle_checks("zzz").empty());
}
