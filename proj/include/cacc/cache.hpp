#pragma once
// Persistent cache for center-matrix profiles, keyed by rule digest and
// level. One append-only text file per rule keeps concurrent per-rule
// workers from contending; malformed lines are ignored on load.

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "cacc/complexity.hpp"

namespace cacc {

class ProfileCache {
 public:
  explicit ProfileCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  const std::filesystem::path& dir() const { return dir_; }

  std::optional<CenterProfiles> load(std::uint64_t digest, int n, int states) {
    std::lock_guard<std::mutex> lock(mu_);
    auto& per_rule = rule_entries(digest);
    const auto it = per_rule.find(n);
    if (it == per_rule.end()) return std::nullopt;
    if (static_cast<int>(it->second.per_center.size()) != states) return std::nullopt;
    return it->second;
  }

  void store(std::uint64_t digest, int n, const CenterProfiles& profiles) {
    std::lock_guard<std::mutex> lock(mu_);
    auto& per_rule = rule_entries(digest);
    if (per_rule.count(n)) return;
    per_rule[n] = profiles;
    std::filesystem::create_directories(dir_);
    std::ofstream out(file_for(digest), std::ios::app);
    out << n;
    for (const auto& p : profiles.per_center)
      out << " " << p.distinct_rows << " " << p.distinct_cols;
    out << "\n";
  }

 private:
  std::filesystem::path file_for(std::uint64_t digest) const {
    char name[32];
    std::snprintf(name, sizeof name, "%016llx",
                  static_cast<unsigned long long>(digest));
    return dir_ / (std::string(name) + ".profiles");
  }

  std::map<int, CenterProfiles>& rule_entries(std::uint64_t digest) {
    auto it = loaded_.find(digest);
    if (it != loaded_.end()) return it->second;
    auto& entries = loaded_[digest];
    std::ifstream in(file_for(digest));
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ss(line);
      int n = 0;
      if (!(ss >> n) || n < 1) continue;
      CenterProfiles cp;
      std::size_t rows = 0, cols = 0;
      while (ss >> rows >> cols)
        cp.per_center.push_back(RowColProfile{rows, cols});
      if (!cp.per_center.empty() && !entries.count(n)) entries[n] = std::move(cp);
    }
    return entries;
  }

  std::filesystem::path dir_;
  std::mutex mu_;
  std::unordered_map<std::uint64_t, std::map<int, CenterProfiles>> loaded_;
};

}  // namespace cacc
