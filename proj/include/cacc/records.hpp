#pragma once
// Analysis results as portable records. A record serializes to a JSON
// object and to a flat CSV row carrying the same fields, so either form
// reconstructs the other; the embedded rule identity and table digest make
// records self-validating.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "cacc/complexity.hpp"
#include "cacc/detectors.hpp"
#include "cacc/oracles.hpp"
#include "cacc/version.hpp"

namespace cacc {

// Identity of an analyzed rule: an elementary code, a named built-in, or a
// custom table spelled out digit by digit.
struct RuleDescriptor {
  enum class Kind { eca, builtin, custom };
  Kind kind = Kind::eca;
  int code = 0;              // eca
  std::string name;          // builtin or custom label
  int states = 2;
  int radius = 1;
  std::vector<State> table;  // custom only

  friend bool operator==(const RuleDescriptor&, const RuleDescriptor&) = default;
};

inline RuleDescriptor eca_descriptor(int code) {
  eca_from_wolfram(code);  // validates the range
  RuleDescriptor d;
  d.kind = RuleDescriptor::Kind::eca;
  d.code = code;
  return d;
}

inline RuleDescriptor builtin_descriptor(std::string_view name) {
  RuleDescriptor d;
  d.kind = RuleDescriptor::Kind::builtin;
  d.name = std::string(name);
  if (name == "three-state") {
    d.states = 3;
  } else if (name == "comparison") {
    d.states = 4;
  } else {
    throw std::invalid_argument("unknown built-in rule: " + std::string(name));
  }
  return d;
}

inline RuleDescriptor custom_descriptor(const RuleTable& rule, std::string label) {
  RuleDescriptor d;
  d.kind = RuleDescriptor::Kind::custom;
  for (char& ch : label)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_' && ch != '.' &&
        ch != '-')
      ch = '_';
  d.name = std::move(label);
  d.states = rule.states();
  d.radius = rule.radius();
  d.table.assign(rule.table().begin(), rule.table().end());
  return d;
}

inline RuleTable rule_from(const RuleDescriptor& d) {
  switch (d.kind) {
    case RuleDescriptor::Kind::eca:
      return eca_from_wolfram(d.code);
    case RuleDescriptor::Kind::builtin:
      return d.name == "three-state" ? three_state_rule() : comparison_rule();
    case RuleDescriptor::Kind::custom:
      return RuleTable(d.states, d.radius, d.table);
  }
  throw std::logic_error("unreachable");
}

// Compact id string: "132", "@three-state", or
// "custom:<label>:<states>:<radius>:<d0>-<d1>-...".
inline std::string descriptor_id(const RuleDescriptor& d) {
  switch (d.kind) {
    case RuleDescriptor::Kind::eca:
      return std::to_string(d.code);
    case RuleDescriptor::Kind::builtin:
      return "@" + d.name;
    case RuleDescriptor::Kind::custom: {
      std::string s = "custom:" + d.name + ":" + std::to_string(d.states) + ":" +
                      std::to_string(d.radius) + ":";
      for (std::size_t i = 0; i < d.table.size(); ++i) {
        if (i) s += '-';
        s += std::to_string(int(d.table[i]));
      }
      return s;
    }
  }
  throw std::logic_error("unreachable");
}

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      return out;
    }
    out.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline long long parse_ll(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("record: bad integer for ") + what +
                                ": '" + s + "'");
  }
}

}  // namespace detail

inline RuleDescriptor descriptor_from_id(std::string_view id) {
  if (id.empty()) throw std::invalid_argument("record: empty rule id");
  if (id.front() == '@') return builtin_descriptor(id.substr(1));
  if (id.substr(0, 7) == "custom:") {
    const auto parts = detail::split(id.substr(7), ':');
    if (parts.size() != 4)
      throw std::invalid_argument("record: malformed custom rule id");
    const int states = static_cast<int>(detail::parse_ll(parts[1], "states"));
    const int radius = static_cast<int>(detail::parse_ll(parts[2], "radius"));
    std::vector<State> table;
    for (const auto& digit : detail::split(parts[3], '-'))
      table.push_back(static_cast<State>(detail::parse_ll(digit, "table entry")));
    return custom_descriptor(RuleTable(states, radius, std::move(table)), parts[0]);
  }
  return eca_descriptor(static_cast<int>(detail::parse_ll(std::string(id), "eca code")));
}

// Sensibility data as stored in records: per-level counts without the full
// position lists.
struct SensibilitySummary {
  struct Level {
    int n = 0, left = 0, right = 0, total = 0;
    bool center = false;
    friend bool operator==(const Level&, const Level&) = default;
  };
  int window = 6;
  bool limited = false;
  bool half_limited = false;
  std::vector<Level> levels;

  static SensibilitySummary from_report(const SensibilityReport& r) {
    SensibilitySummary s;
    s.window = r.window;
    s.limited = r.limited;
    s.half_limited = r.half_limited;
    for (const auto& lv : r.levels)
      s.levels.push_back(Level{lv.n, lv.left, lv.right, lv.total, lv.center});
    return s;
  }

  friend bool operator==(const SensibilitySummary&, const SensibilitySummary&) = default;
};

struct ResultRecord {
  RuleDescriptor rule;
  std::string digest;   // 16 hex digits of the rule-table digest
  std::string version = kVersion;
  int n_max = 0;
  std::vector<std::size_t> d;  // d_1..d_n_max when computed
  std::optional<ClassLabel> label;
  bool additive_checked = false;
  std::optional<AdditivityWitness> additive;  // present only when found
  std::optional<SensibilitySummary> sensibility;
  std::optional<NilpotencyReport> nilpotency;
  std::vector<RnScan> rn_scans;

  friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

inline std::string digest_hex(std::uint64_t digest) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
  return std::string(buf);
}

// True when the embedded digest matches the rule the record names.
inline bool record_self_consistent(const ResultRecord& r) {
  return r.digest == digest_hex(rule_from(r.rule).digest());
}

// ---- JSON -------------------------------------------------------------------

inline nlohmann::json record_to_json(const ResultRecord& r) {
  nlohmann::json j;
  j["rule"] = {{"id", descriptor_id(r.rule)},
               {"states", r.rule.states},
               {"radius", r.rule.radius}};
  j["digest"] = r.digest;
  j["version"] = r.version;
  j["n_max"] = r.n_max;
  j["d"] = r.d;
  if (r.label) {
    nlohmann::json c;
    switch (r.label->kind) {
      case ClassLabel::Kind::bounded:
        c = {{"label", "bounded"}, {"bound", r.label->bound}};
        break;
      case ClassLabel::Kind::linear:
        c = {{"label", "linear"},
             {"a1", {r.label->a1_num, r.label->a1_den}},
             {"a0", r.label->a0},
             {"n0", r.label->n0}};
        break;
      case ClassLabel::Kind::other:
        c = {{"label", "other"}, {"growth_hint", r.label->growth_hint}};
        break;
    }
    j["class"] = c;
  } else {
    j["class"] = nullptr;
  }
  if (r.additive_checked) {
    if (r.additive)
      j["additive"] = {{"found", true},
                       {"neutral", int(r.additive->neutral)},
                       {"oplus", r.additive->oplus.digits()},
                       {"otimes", r.additive->otimes.digits()}};
    else
      j["additive"] = {{"found", false}};
  } else {
    j["additive"] = nullptr;
  }
  if (r.sensibility) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& lv : r.sensibility->levels)
      levels.push_back({{"n", lv.n},
                        {"left", lv.left},
                        {"right", lv.right},
                        {"total", lv.total},
                        {"center", lv.center}});
    j["sensibility"] = {{"window", r.sensibility->window},
                        {"limited", r.sensibility->limited},
                        {"half_limited", r.sensibility->half_limited},
                        {"levels", levels}};
  } else {
    j["sensibility"] = nullptr;
  }
  if (r.nilpotency) {
    nlohmann::json nj = {{"n_max", r.nilpotency->n_max}};
    if (r.nilpotency->constant_from) {
      nj["constant_from"] = *r.nilpotency->constant_from;
      nj["value"] = int(r.nilpotency->value);
    } else {
      nj["constant_from"] = nullptr;
    }
    j["nilpotency"] = nj;
  } else {
    j["nilpotency"] = nullptr;
  }
  nlohmann::json scans = nlohmann::json::array();
  for (const auto& s : r.rn_scans)
    scans.push_back({{"n", s.n},
                     {"rows", s.per_p_rows},
                     {"max", s.per_p},
                     {"r_n_rows", s.r_n_rows},
                     {"argmax_p_rows", s.argmax_p_rows},
                     {"r_n", s.r_n},
                     {"argmax_p", s.argmax_p}});
  j["rn_scans"] = scans;
  return j;
}

inline ResultRecord record_from_json(const nlohmann::json& j) {
  ResultRecord r;
  r.rule = descriptor_from_id(j.at("rule").at("id").get<std::string>());
  r.digest = j.at("digest").get<std::string>();
  r.version = j.at("version").get<std::string>();
  r.n_max = j.at("n_max").get<int>();
  r.d = j.at("d").get<std::vector<std::size_t>>();
  if (!j.at("class").is_null()) {
    const auto& c = j.at("class");
    ClassLabel lbl;
    const std::string kind = c.at("label").get<std::string>();
    if (kind == "bounded") {
      lbl.kind = ClassLabel::Kind::bounded;
      lbl.bound = c.at("bound").get<std::size_t>();
    } else if (kind == "linear") {
      lbl.kind = ClassLabel::Kind::linear;
      lbl.a1_num = c.at("a1").at(0).get<long long>();
      lbl.a1_den = c.at("a1").at(1).get<long long>();
      lbl.a0 = c.at("a0").get<long long>();
      lbl.n0 = c.at("n0").get<int>();
    } else if (kind == "other") {
      lbl.kind = ClassLabel::Kind::other;
      lbl.growth_hint = c.at("growth_hint").get<double>();
    } else {
      throw std::invalid_argument("record: unknown class label " + kind);
    }
    r.label = lbl;
  }
  if (!j.at("additive").is_null()) {
    r.additive_checked = true;
    const auto& a = j.at("additive");
    if (a.at("found").get<bool>()) {
      AdditivityWitness w;
      w.neutral = static_cast<State>(a.at("neutral").get<int>());
      const std::string op = a.at("oplus").get<std::string>();
      const std::string ot = a.at("otimes").get<std::string>();
      const int s = static_cast<int>(std::lround(std::sqrt(double(op.size()))));
      w.oplus.states = w.otimes.states = s;
      for (char ch : op) w.oplus.table.push_back(static_cast<State>(ch - '0'));
      for (char ch : ot) w.otimes.table.push_back(static_cast<State>(ch - '0'));
      r.additive = w;
    }
  }
  if (!j.at("sensibility").is_null()) {
    const auto& sj = j.at("sensibility");
    SensibilitySummary s;
    s.window = sj.at("window").get<int>();
    s.limited = sj.at("limited").get<bool>();
    s.half_limited = sj.at("half_limited").get<bool>();
    for (const auto& lj : sj.at("levels"))
      s.levels.push_back(SensibilitySummary::Level{
          lj.at("n").get<int>(), lj.at("left").get<int>(), lj.at("right").get<int>(),
          lj.at("total").get<int>(), lj.at("center").get<bool>()});
    r.sensibility = s;
  }
  if (!j.at("nilpotency").is_null()) {
    const auto& nj = j.at("nilpotency");
    NilpotencyReport np;
    np.n_max = nj.at("n_max").get<int>();
    if (!nj.at("constant_from").is_null()) {
      np.constant_from = nj.at("constant_from").get<int>();
      np.value = static_cast<State>(nj.at("value").get<int>());
    }
    r.nilpotency = np;
  }
  for (const auto& sj : j.at("rn_scans")) {
    RnScan s;
    s.n = sj.at("n").get<int>();
    s.per_p_rows = sj.at("rows").get<std::vector<std::size_t>>();
    s.per_p = sj.at("max").get<std::vector<std::size_t>>();
    s.r_n_rows = sj.at("r_n_rows").get<std::size_t>();
    s.argmax_p_rows = sj.at("argmax_p_rows").get<int>();
    s.r_n = sj.at("r_n").get<std::size_t>();
    s.argmax_p = sj.at("argmax_p").get<int>();
    r.rn_scans.push_back(std::move(s));
  }
  return r;
}

// ---- CSV --------------------------------------------------------------------
// Fixed columns, then d_1..d_n_max. List-valued cells use ';', ':' and '|'
// separators, so no cell ever contains a comma and no quoting is needed.

namespace detail {

inline const char* kCsvFixed =
    "rule,states,radius,digest,version,n_max,class,class_params,additive,"
    "oplus,otimes,neutral,limited,half_limited,sens_window,sens_levels,"
    "nilp_nmax,nilp_from,nilp_value,rn_scans";
inline constexpr int kCsvFixedCount = 20;

inline std::string join_sizes(const std::vector<std::size_t>& v, char sep) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += sep;
    s += std::to_string(v[i]);
  }
  return s;
}

}  // namespace detail

inline std::string csv_header(int n_max) {
  std::string h = detail::kCsvFixed;
  for (int n = 1; n <= n_max; ++n) h += ",d_" + std::to_string(n);
  return h;
}

inline std::string record_to_csv(const ResultRecord& r) {
  std::vector<std::string> cells;
  cells.push_back(descriptor_id(r.rule));
  cells.push_back(std::to_string(r.rule.states));
  cells.push_back(std::to_string(r.rule.radius));
  cells.push_back(r.digest);
  cells.push_back(r.version);
  cells.push_back(std::to_string(r.n_max));
  if (r.label) {
    switch (r.label->kind) {
      case ClassLabel::Kind::bounded:
        cells.push_back("bounded");
        cells.push_back("bound=" + std::to_string(r.label->bound));
        break;
      case ClassLabel::Kind::linear:
        cells.push_back("linear");
        cells.push_back("a1=" + std::to_string(r.label->a1_num) + "/" +
                        std::to_string(r.label->a1_den) +
                        ";a0=" + std::to_string(r.label->a0) +
                        ";n0=" + std::to_string(r.label->n0));
        break;
      case ClassLabel::Kind::other: {
        char buf[32];
        std::snprintf(buf, sizeof buf, "hint=%.3f", r.label->growth_hint);
        cells.push_back("other");
        cells.push_back(buf);
        break;
      }
    }
  } else {
    cells.push_back("");
    cells.push_back("");
  }
  if (r.additive_checked) {
    cells.push_back(r.additive ? "1" : "0");
    cells.push_back(r.additive ? r.additive->oplus.digits() : "");
    cells.push_back(r.additive ? r.additive->otimes.digits() : "");
    cells.push_back(r.additive ? std::to_string(int(r.additive->neutral)) : "");
  } else {
    for (int i = 0; i < 4; ++i) cells.push_back("");
  }
  if (r.sensibility) {
    cells.push_back(r.sensibility->limited ? "1" : "0");
    cells.push_back(r.sensibility->half_limited ? "1" : "0");
    cells.push_back(std::to_string(r.sensibility->window));
    std::string lv;
    for (std::size_t i = 0; i < r.sensibility->levels.size(); ++i) {
      const auto& l = r.sensibility->levels[i];
      if (i) lv += ';';
      lv += std::to_string(l.n) + ":" + std::to_string(l.left) + ":" +
            std::to_string(l.right) + ":" + std::to_string(l.total) + ":" +
            (l.center ? "1" : "0");
    }
    cells.push_back(lv);
  } else {
    for (int i = 0; i < 4; ++i) cells.push_back("");
  }
  if (r.nilpotency) {
    cells.push_back(std::to_string(r.nilpotency->n_max));
    cells.push_back(r.nilpotency->constant_from
                        ? std::to_string(*r.nilpotency->constant_from)
                        : "none");
    cells.push_back(r.nilpotency->constant_from
                        ? std::to_string(int(r.nilpotency->value))
                        : "");
  } else {
    for (int i = 0; i < 3; ++i) cells.push_back("");
  }
  std::string scans;
  for (std::size_t i = 0; i < r.rn_scans.size(); ++i) {
    const auto& s = r.rn_scans[i];
    if (i) scans += ';';
    scans += std::to_string(s.n) + ":" + detail::join_sizes(s.per_p_rows, '|') + ":" +
             detail::join_sizes(s.per_p, '|');
  }
  cells.push_back(scans);
  for (std::size_t v : r.d) cells.push_back(std::to_string(v));
  for (int n = static_cast<int>(r.d.size()); n < r.n_max; ++n) cells.push_back("");

  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ',';
    row += cells[i];
  }
  return row;
}

inline ResultRecord record_from_csv(std::string_view header, std::string_view row) {
  const auto head = detail::split(header, ',');
  const auto cells = detail::split(row, ',');
  if (head.size() != cells.size() || head.size() < detail::kCsvFixedCount)
    throw std::invalid_argument("record: CSV header and row do not line up");
  ResultRecord r;
  r.rule = descriptor_from_id(cells[0]);
  if (detail::parse_ll(cells[1], "states") != r.rule.states ||
      detail::parse_ll(cells[2], "radius") != r.rule.radius)
    throw std::invalid_argument("record: CSV states/radius contradict the rule id");
  r.digest = cells[3];
  r.version = cells[4];
  r.n_max = static_cast<int>(detail::parse_ll(cells[5], "n_max"));
  if (!cells[6].empty()) {
    ClassLabel lbl;
    if (cells[6] == "bounded") {
      lbl.kind = ClassLabel::Kind::bounded;
      lbl.bound = static_cast<std::size_t>(
          detail::parse_ll(cells[7].substr(6), "bound"));
    } else if (cells[6] == "linear") {
      lbl.kind = ClassLabel::Kind::linear;
      const auto parts = detail::split(cells[7], ';');
      if (parts.size() != 3)
        throw std::invalid_argument("record: malformed linear parameters");
      const auto frac = detail::split(parts[0].substr(3), '/');
      lbl.a1_num = detail::parse_ll(frac.at(0), "a1 numerator");
      lbl.a1_den = detail::parse_ll(frac.at(1), "a1 denominator");
      lbl.a0 = detail::parse_ll(parts[1].substr(3), "a0");
      lbl.n0 = static_cast<int>(detail::parse_ll(parts[2].substr(3), "n0"));
    } else if (cells[6] == "other") {
      lbl.kind = ClassLabel::Kind::other;
      lbl.growth_hint = std::strtod(cells[7].substr(5).c_str(), nullptr);
    } else {
      throw std::invalid_argument("record: unknown class " + cells[6]);
    }
    r.label = lbl;
  }
  if (!cells[8].empty()) {
    r.additive_checked = true;
    if (cells[8] == "1") {
      AdditivityWitness w;
      const int s = r.rule.states;
      w.oplus.states = w.otimes.states = s;
      for (char ch : cells[9]) w.oplus.table.push_back(static_cast<State>(ch - '0'));
      for (char ch : cells[10]) w.otimes.table.push_back(static_cast<State>(ch - '0'));
      w.neutral = static_cast<State>(detail::parse_ll(cells[11], "neutral"));
      r.additive = w;
    }
  }
  if (!cells[14].empty()) {
    SensibilitySummary s;
    s.limited = cells[12] == "1";
    s.half_limited = cells[13] == "1";
    s.window = static_cast<int>(detail::parse_ll(cells[14], "sens window"));
    if (!cells[15].empty())
      for (const auto& lv : detail::split(cells[15], ';')) {
        const auto f = detail::split(lv, ':');
        if (f.size() != 5)
          throw std::invalid_argument("record: malformed sensibility level");
        s.levels.push_back(SensibilitySummary::Level{
            static_cast<int>(detail::parse_ll(f[0], "n")),
            static_cast<int>(detail::parse_ll(f[1], "left")),
            static_cast<int>(detail::parse_ll(f[2], "right")),
            static_cast<int>(detail::parse_ll(f[3], "total")), f[4] == "1"});
      }
    r.sensibility = s;
  }
  if (!cells[16].empty()) {
    NilpotencyReport np;
    np.n_max = static_cast<int>(detail::parse_ll(cells[16], "nilpotency n_max"));
    if (cells[17] != "none") {
      np.constant_from = static_cast<int>(detail::parse_ll(cells[17], "nilpotency n0"));
      np.value = static_cast<State>(detail::parse_ll(cells[18], "nilpotency value"));
    }
    r.nilpotency = np;
  }
  if (!cells[19].empty())
    for (const auto& sc : detail::split(cells[19], ';')) {
      const auto f = detail::split(sc, ':');
      if (f.size() != 3)
        throw std::invalid_argument("record: malformed partition scan");
      RnScan s;
      s.n = static_cast<int>(detail::parse_ll(f[0], "scan n"));
      for (const auto& v : detail::split(f[1], '|'))
        s.per_p_rows.push_back(
            static_cast<std::size_t>(detail::parse_ll(v, "scan rows")));
      for (const auto& v : detail::split(f[2], '|'))
        s.per_p.push_back(static_cast<std::size_t>(detail::parse_ll(v, "scan max")));
      for (std::size_t i = 0; i < s.per_p_rows.size(); ++i)
        if (s.per_p_rows[i] > s.r_n_rows) {
          s.r_n_rows = s.per_p_rows[i];
          s.argmax_p_rows = static_cast<int>(i) + 1;
        }
      for (std::size_t i = 0; i < s.per_p.size(); ++i)
        if (s.per_p[i] > s.r_n) {
          s.r_n = s.per_p[i];
          s.argmax_p = static_cast<int>(i) + 1;
        }
      r.rn_scans.push_back(std::move(s));
    }
  for (std::size_t i = detail::kCsvFixedCount; i < cells.size(); ++i)
    if (!cells[i].empty())
      r.d.push_back(static_cast<std::size_t>(detail::parse_ll(cells[i], "d value")));
  return r;
}

}  // namespace cacc
