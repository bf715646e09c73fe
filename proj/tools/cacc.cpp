// Command line front end: analysis records, classification sweeps, matrix
// and spacetime renders, detectors, and oracle checks. Exit codes: 0 ok,
// 1 input error, 2 resource limit.
#include <algorithm>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "cacc/analysis.hpp"

namespace {

using namespace cacc;

RuleDescriptor rule_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open rule file: " + path);
  int s = 0, r = 0;
  if (!(in >> s >> r))
    throw std::invalid_argument("rule file must start with `states radius`: " + path);
  if (s < 2 || r < 1)
    throw std::invalid_argument("rule file needs states >= 2 and radius >= 1");
  std::vector<State> table;
  long long v = 0;
  while (in >> v) {
    if (v < 0 || v >= s)
      throw std::invalid_argument("rule file entry out of range: " + std::to_string(v));
    table.push_back(static_cast<State>(v));
  }
  const RuleTable rule(s, r, std::move(table));
  return custom_descriptor(rule, std::filesystem::path(path).stem().string());
}

// ECA codes, @builtins and custom ids resolve directly; anything else is
// read as a rule file.
RuleDescriptor parse_rule(const std::string& spec) {
  if (!spec.empty() && (spec[0] == '@' || spec.rfind("custom:", 0) == 0 ||
                        spec.find_first_not_of("0123456789") == std::string::npos))
    return descriptor_from_id(spec);
  return rule_from_file(spec);
}

// Shrinks the tail window when the sequence is too short; classification is
// skipped entirely when fewer than 3 tail points remain.
std::optional<ClassifierParams> fit_classifier(ClassifierParams p, int n_max) {
  p.tail_len = std::min(p.tail_len, n_max - p.min_n);
  if (p.tail_len < 3) return std::nullopt;
  return p;
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

void emit_text(const std::string& data, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << data;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write: " + out_path);
  out << data;
}

nlohmann::json stamp_json() {
  return {{"tool", std::string("cacc ") + kVersion}, {"time", utc_now()}};
}

nlohmann::json scan_json(const RnScan& s) {
  return {{"n", s.n},
          {"rows", s.per_p_rows},
          {"max", s.per_p},
          {"r_n_rows", s.r_n_rows},
          {"argmax_p_rows", s.argmax_p_rows},
          {"r_n", s.r_n},
          {"argmax_p", s.argmax_p}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"one-way communication complexity of one-dimensional cellular automata"};
  app.require_subcommand(1);

  std::string cache_dir = "./.cacc-cache";
  if (const char* env = std::getenv("CACC_CACHE_DIR")) cache_dir = env;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::string format = "json";
  std::string out_path;
  bool stamp = false, verify_cache = false, no_detectors = false;
  std::size_t budget_mib = 512;

  app.add_option("--cache-dir", cache_dir, "profile cache directory")
      ->capture_default_str();
  app.add_option("--jobs", jobs, "worker threads for sweeps")->capture_default_str();
  app.add_option("--format", format, "output encoding")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--out", out_path, "write output to this file instead of stdout");
  app.add_flag("--stamp", stamp, "include tool and time metadata in the output");
  app.add_flag("--verify-cache", verify_cache, "recompute cached profiles and compare");
  app.add_flag("--no-detectors", no_detectors,
               "skip additivity, sensibility and nilpotency");
  app.add_option("--budget-mib", budget_mib, "memory budget for tabulation")
      ->capture_default_str();

  int rc = 0;
  auto tab_opts = [&] {
    TabulateOptions t;
    t.memory_budget = budget_mib << 20;
    return t;
  };
  auto analysis_opts = [&](int n_max, ProfileCache* cache) {
    AnalyzeOptions opts;
    opts.n_max = n_max;
    opts.detectors = !no_detectors;
    opts.tabulate = tab_opts();
    opts.cache = cache;
    opts.verify_cache = verify_cache;
    const auto fitted = fit_classifier(opts.classifier, n_max);
    opts.classify = fitted.has_value();
    if (fitted) opts.classifier = *fitted;
    return opts;
  };
  auto emit_records = [&](const std::vector<ResultRecord>& recs, int n_max,
                          bool as_array) {
    if (format == "json") {
      nlohmann::json body;
      if (as_array) {
        body = nlohmann::json::array();
        for (const auto& r : recs) body.push_back(record_to_json(r));
        if (stamp) body = nlohmann::json{{"stamp", stamp_json()}, {"records", body}};
      } else {
        body = record_to_json(recs.front());
        if (stamp) body["stamp"] = stamp_json();
      }
      emit_text(body.dump(2) + "\n", out_path);
    } else {
      std::string text;
      if (stamp) text += "# cacc " + std::string(kVersion) + " " + utc_now() + "\n";
      text += csv_header(n_max) + "\n";
      for (const auto& r : recs) text += record_to_csv(r) + "\n";
      emit_text(text, out_path);
    }
  };

  auto* an = app.add_subcommand("analyze", "full record for one rule");
  an->fallthrough();
  std::string an_rule;
  int an_nmax = 12;
  an->add_option("--rule", an_rule, "ECA code, @builtin, or rule file path")
      ->required();
  an->add_option("--n-max", an_nmax, "deepest level")->capture_default_str();
  an->callback([&] {
    ProfileCache cache{cache_dir};
    const auto opts = analysis_opts(an_nmax, &cache);
    emit_records({analyze_rule(parse_rule(an_rule), opts)}, an_nmax, false);
  });

  auto* ca = app.add_subcommand("classify-all", "analyze every representative");
  ca->fallthrough();
  int ca_nmax = 12;
  std::vector<int> ca_rules;
  ca->add_option("--n-max", ca_nmax, "deepest level")->capture_default_str();
  ca->add_option("--rules", ca_rules, "restrict to these ECA codes")->delimiter(',');
  ca->callback([&] {
    ProfileCache cache{cache_dir};
    const auto opts = analysis_opts(ca_nmax, &cache);
    std::vector<ResultRecord> recs;
    if (ca_rules.empty()) {
      recs = classify_all(opts, static_cast<int>(jobs));
    } else {
      std::sort(ca_rules.begin(), ca_rules.end());
      ca_rules.erase(std::unique(ca_rules.begin(), ca_rules.end()), ca_rules.end());
      for (int code : ca_rules) recs.push_back(analyze_rule(eca_descriptor(code), opts));
    }
    emit_records(recs, ca_nmax, true);
  });

  auto* sq = app.add_subcommand("sequence", "d_1..d_n for one rule");
  sq->fallthrough();
  std::string sq_rule;
  int sq_nmax = 12;
  sq->add_option("--rule", sq_rule, "ECA code, @builtin, or rule file path")
      ->required();
  sq->add_option("--n-max", sq_nmax, "deepest level")->capture_default_str();
  sq->callback([&] {
    ProfileCache cache{cache_dir};
    AnalyzeOptions opts = analysis_opts(sq_nmax, &cache);
    opts.detectors = false;
    opts.classify = false;
    const ResultRecord rec = analyze_rule(parse_rule(sq_rule), opts);
    if (format == "json") {
      nlohmann::json j{{"rule", descriptor_id(rec.rule)},
                       {"n_max", rec.n_max},
                       {"d", rec.d}};
      if (stamp) j["stamp"] = stamp_json();
      emit_text(j.dump(2) + "\n", out_path);
    } else {
      std::string text;
      if (stamp) text += "# cacc " + std::string(kVersion) + " " + utc_now() + "\n";
      text += "n,d\n";
      for (std::size_t k = 0; k < rec.d.size(); ++k)
        text += std::to_string(k + 1) + "," + std::to_string(rec.d[k]) + "\n";
      emit_text(text, out_path);
    }
  });

  auto* rd = app.add_subcommand("render", "one matrix as a PBM/PGM image");
  rd->fallthrough();
  std::string rd_rule;
  int rd_n = 1, rd_center = 1, rd_partition = 1;
  rd->add_option("--rule", rd_rule, "ECA code, @builtin, or rule file path")
      ->required();
  rd->add_option("--n", rd_n, "level")->required();
  auto* rd_c = rd->add_option("--center", rd_center, "center state, renders M_c");
  auto* rd_p = rd->add_option("--partition", rd_partition, "split point, renders M_p");
  rd_c->excludes(rd_p);
  rd_p->excludes(rd_c);
  rd->callback([&] {
    const RuleTable rule = rule_from(parse_rule(rd_rule));
    const IteratedTable t = tabulate(rule, rd_n, tab_opts());
    const StateMatrix m = rd_p->count()
                              ? build_partition_matrix(t, rd_partition)
                              : build_center_matrix(t, static_cast<State>(rd_center));
    std::ostringstream os;
    export_pbm(m, os);
    emit_text(os.str(), out_path);
  });

  auto* st = app.add_subcommand("spacetime", "evolution triangle as a PBM/PGM image");
  st->fallthrough();
  std::string st_rule, st_word;
  int st_steps = 0;
  st->add_option("--rule", st_rule, "ECA code, @builtin, or rule file path")
      ->required();
  st->add_option("--word", st_word, "initial configuration as a digit string")
      ->required();
  st->add_option("--steps", st_steps, "evolution steps")->required();
  st->callback([&] {
    const RuleTable rule = rule_from(parse_rule(st_rule));
    Word w;
    for (char ch : st_word) {
      if (ch < '0' || ch > '9')
        throw std::invalid_argument("spacetime: word must be a digit string");
      w.push_back(static_cast<State>(ch - '0'));
    }
    const SpacetimeDiagram d = spacetime(rule, std::move(w), st_steps);
    std::ostringstream os;
    export_pbm(spacetime_image(d, rule.states(), rule.radius()), os);
    emit_text(os.str(), out_path);
  });

  auto* ps = app.add_subcommand("partition-scan",
                                "distinct-row scan over every split point");
  ps->fallthrough();
  std::string ps_rule;
  std::vector<int> ps_levels;
  ps->add_option("--rule", ps_rule, "ECA code, @builtin, or rule file path")
      ->required();
  ps->add_option("--levels", ps_levels, "levels to scan")->delimiter(',')->required();
  ps->callback([&] {
    const RuleTable rule = rule_from(parse_rule(ps_rule));
    std::sort(ps_levels.begin(), ps_levels.end());
    ps_levels.erase(std::unique(ps_levels.begin(), ps_levels.end()), ps_levels.end());
    if (ps_levels.front() < 1)
      throw std::invalid_argument("partition-scan: levels must be >= 1");
    Tabulator tab(rule, tab_opts());
    std::vector<RnScan> scans;
    for (int n = 1; n <= ps_levels.back(); ++n) {
      if (n > 1) tab.advance();
      if (std::binary_search(ps_levels.begin(), ps_levels.end(), n))
        scans.push_back(r_n_scan_table(tab.table()));
    }
    if (format == "json") {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& s : scans) arr.push_back(scan_json(s));
      nlohmann::json body =
          stamp ? nlohmann::json{{"stamp", stamp_json()}, {"scans", arr}} : arr;
      emit_text(body.dump(2) + "\n", out_path);
    } else {
      std::string text;
      if (stamp) text += "# cacc " + std::string(kVersion) + " " + utc_now() + "\n";
      text += "n,p,rows,max\n";
      for (const auto& s : scans)
        for (std::size_t i = 0; i < s.per_p.size(); ++i)
          text += std::to_string(s.n) + "," + std::to_string(i + 1) + "," +
                  std::to_string(s.per_p_rows[i]) + "," +
                  std::to_string(s.per_p[i]) + "\n";
      emit_text(text, out_path);
    }
  });

  auto* dt = app.add_subcommand("detect", "algebraic detectors");
  dt->require_subcommand(1);
  dt->fallthrough();

  auto* da = dt->add_subcommand("additivity", "two-operator witness search");
  da->fallthrough();
  std::string da_rule;
  da->add_option("--rule", da_rule, "ECA code, @builtin, or rule file path")
      ->required();
  da->callback([&] {
    const RuleDescriptor desc = parse_rule(da_rule);
    const auto w = detect_additivity(rule_from(desc));
    if (format == "json") {
      nlohmann::json j{{"rule", descriptor_id(desc)}, {"found", w.has_value()}};
      if (w) {
        j["oplus"] = w->oplus.digits();
        j["neutral"] = int(w->neutral);
        j["otimes"] = w->otimes.digits();
      }
      if (stamp) j["stamp"] = stamp_json();
      emit_text(j.dump(2) + "\n", out_path);
    } else {
      std::string text = "rule,found,oplus,neutral,otimes\n" + descriptor_id(desc);
      text += w ? ",1," + w->oplus.digits() + "," + std::to_string(int(w->neutral)) +
                      "," + w->otimes.digits()
                : ",0,,,";
      emit_text(text + "\n", out_path);
    }
  });

  auto* ds = dt->add_subcommand("sensibility", "essential positions per level");
  ds->fallthrough();
  std::string ds_rule;
  int ds_nmax = 12;
  ds->add_option("--rule", ds_rule, "ECA code, @builtin, or rule file path")
      ->required();
  ds->add_option("--n-max", ds_nmax, "deepest level")->capture_default_str();
  ds->callback([&] {
    const RuleDescriptor desc = parse_rule(ds_rule);
    const SensibilityReport rep =
        sensibility_report(rule_from(desc), ds_nmax, tab_opts());
    if (format == "json") {
      nlohmann::json levels = nlohmann::json::array();
      for (const auto& lv : rep.levels)
        levels.push_back({{"n", lv.n},
                          {"left", lv.left},
                          {"right", lv.right},
                          {"total", lv.total},
                          {"center", lv.center},
                          {"positions", lv.essential}});
      nlohmann::json j{{"rule", descriptor_id(desc)},
                       {"window", rep.window},
                       {"limited", rep.limited},
                       {"half_limited", rep.half_limited},
                       {"levels", levels}};
      if (stamp) j["stamp"] = stamp_json();
      emit_text(j.dump(2) + "\n", out_path);
    } else {
      std::string lv;
      for (std::size_t i = 0; i < rep.levels.size(); ++i) {
        const auto& l = rep.levels[i];
        if (i) lv += ';';
        lv += std::to_string(l.n) + ":" + std::to_string(l.left) + ":" +
              std::to_string(l.right) + ":" + std::to_string(l.total) + ":" +
              (l.center ? "1" : "0");
      }
      emit_text("rule,limited,half_limited,window,levels\n" + descriptor_id(desc) +
                    "," + (rep.limited ? "1" : "0") + "," +
                    (rep.half_limited ? "1" : "0") + "," +
                    std::to_string(rep.window) + "," + lv + "\n",
                out_path);
    }
  });

  auto* dn = dt->add_subcommand("nilpotency", "constant-iterate probe");
  dn->fallthrough();
  std::string dn_rule;
  int dn_nmax = 12;
  dn->add_option("--rule", dn_rule, "ECA code, @builtin, or rule file path")
      ->required();
  dn->add_option("--n-max", dn_nmax, "deepest level")->capture_default_str();
  dn->callback([&] {
    const RuleDescriptor desc = parse_rule(dn_rule);
    const NilpotencyReport rep =
        nilpotency_probe(rule_from(desc), dn_nmax, tab_opts());
    if (format == "json") {
      nlohmann::json j{{"rule", descriptor_id(desc)}, {"n_max", rep.n_max}};
      if (rep.constant_from) {
        j["constant_from"] = *rep.constant_from;
        j["value"] = int(rep.value);
      } else {
        j["constant_from"] = nullptr;
      }
      if (stamp) j["stamp"] = stamp_json();
      emit_text(j.dump(2) + "\n", out_path);
    } else {
      emit_text("rule,n_max,constant_from,value\n" + descriptor_id(desc) + "," +
                    std::to_string(rep.n_max) + "," +
                    (rep.constant_from ? std::to_string(*rep.constant_from) : "none") +
                    "," + (rep.constant_from ? std::to_string(int(rep.value)) : "") +
                    "\n",
                out_path);
    }
  });

  auto* oc = app.add_subcommand("oracle-check", "closed forms against brute force");
  oc->fallthrough();
  std::string oc_filter;
  oc->add_option("--filter", oc_filter, "run only checks with this name prefix");
  oc->callback([&] {
    const auto checks = run_oracle_checks(oc_filter, tab_opts());
    if (checks.empty())
      throw std::invalid_argument("no oracle checks match: " + oc_filter);
    std::string text;
    int failed = 0;
    for (const auto& c : checks) {
      text += (c.pass ? "PASS " : "FAIL ") + c.name;
      if (!c.pass) {
        text += ": " + c.detail;
        ++failed;
      }
      text += "\n";
    }
    text += std::to_string(checks.size() - failed) + "/" +
            std::to_string(checks.size()) + " checks passed\n";
    emit_text(text, out_path);
    if (failed) rc = 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const cacc::resource_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::bad_alloc&) {
    std::cerr << "error: out of memory\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
