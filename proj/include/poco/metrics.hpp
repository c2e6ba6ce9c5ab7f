#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "poco/fuzz.hpp"

namespace poco {

// |union of S_1..S_n| / sum |S_i| at each round; absent when the denominator
// is zero.
inline std::vector<std::optional<double>> fresh_seed_ratio(
    const std::vector<std::vector<std::string>>& roundSelections) {
  std::vector<std::optional<double>> out;
  std::set<std::string> seen;
  std::size_t total = 0;
  for (const auto& round : roundSelections) {
    seen.insert(round.begin(), round.end());
    total += round.size();
    if (total == 0) {
      out.push_back(std::nullopt);
    } else {
      out.push_back(static_cast<double>(seen.size()) / static_cast<double>(total));
    }
  }
  return out;
}

// Vargha-Delaney probability of superiority of A over B.
inline double a12(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw std::runtime_error("a12 requires non-empty samples");
  double wins = 0.0;
  double ties = 0.0;
  for (double x : a) {
    for (double y : b) {
      if (x > y) wins += 1.0;
      else if (x == y) ties += 1.0;
    }
  }
  return (wins + 0.5 * ties) / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

struct BugStat {
  std::string label;
  double gamma = 0.0;                      // discoveries / repeats
  std::optional<double> medianExecsToBug;  // over discovering repeats only
};

inline std::vector<BugStat> bug_stats(const std::vector<FuzzReport>& reports) {
  std::map<std::string, std::vector<double>> byLabel;
  for (const auto& r : reports) {
    for (const auto& c : r.crashes) byLabel[c.label].push_back(static_cast<double>(c.execIndex));
  }
  std::vector<BugStat> out;
  for (auto& [label, execs] : byLabel) {
    BugStat s;
    s.label = label;
    s.gamma = static_cast<double>(execs.size()) / static_cast<double>(reports.size());
    std::sort(execs.begin(), execs.end());
    std::size_t n = execs.size();
    s.medianExecsToBug = n % 2 ? execs[n / 2] : (execs[n / 2 - 1] + execs[n / 2]) / 2.0;
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace poco
