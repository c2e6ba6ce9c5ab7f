#pragma once

// Independent reference implementations used to cross-check the library.
// These favour brute force over cleverness on purpose.

#include <algorithm>
#include <optional>
#include <set>
#include <vector>

#include "poco/poco.hpp"

namespace oracle {

// Smallest-cardinality subset of the corpus covering the union of all edges,
// by exhaustive subset enumeration (popcount-ascending). Corpus must be small.
inline std::vector<std::string> exhaustive_min_cover(const poco::Target& t,
                                                     const poco::ToggleVector& tv,
                                                     const poco::Corpus& corpus,
                                                     std::int64_t stepBudget) {
  const std::size_t n = corpus.size();
  std::vector<poco::EdgeSet> edges(n);
  poco::EdgeSet full;
  for (std::size_t i = 0; i < n; ++i) {
    edges[i] = poco::execute(t, tv, corpus[i], stepBudget).edges;
    full.insert(edges[i].begin(), edges[i].end());
  }
  if (full.empty()) {
    // Edge-free degenerate case: one representative seed, mirroring cmin.
    const poco::Seed* best = &corpus.front();
    for (const auto& s : corpus) {
      if (s.size() < best->size() || (s.size() == best->size() && s.id < best->id)) {
        best = &s;
      }
    }
    return {best->id};
  }
  std::vector<std::uint32_t> masks;
  for (std::uint32_t m = 0; m < (1u << n); ++m) masks.push_back(m);
  std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
    return __builtin_popcount(a) < __builtin_popcount(b);
  });
  for (std::uint32_t m : masks) {
    poco::EdgeSet cov;
    for (std::size_t i = 0; i < n; ++i)
      if (m & (1u << i)) cov.insert(edges[i].begin(), edges[i].end());
    if (cov == full) {
      std::vector<std::string> ids;
      for (std::size_t i = 0; i < n; ++i)
        if (m & (1u << i)) ids.push_back(corpus[i].id);
      std::sort(ids.begin(), ids.end());
      return ids;
    }
  }
  return {};
}

// Outermost-obstacle oracle by direct ancestor inspection: an enabled guard is
// outermost iff every hierarchy ancestor (up to the virtual root) is disabled
// and it has at least one such ancestor or sits at a root.
inline std::set<poco::GuardId> outermost_by_ancestors(const poco::GuardHierarchy& h) {
  std::set<poco::GuardId> out;
  for (poco::GuardId g = 0; g < h.guardCount; ++g) {
    if (!h.enabled(g)) continue;
    bool allAncestorsDisabled = true;
    for (poco::GuardId p = h.parent[static_cast<std::size_t>(g)]; p != poco::kVirtualRoot;
         p = h.parent[static_cast<std::size_t>(p)]) {
      if (h.enabled(p)) {
        allAncestorsDisabled = false;
        break;
      }
    }
    if (allAncestorsDisabled) out.insert(g);
  }
  return out;
}

// Reckless oracle for targets whose guards fault independently: a disabled
// guard is reckless iff disabling it alone on top of nothing crashes some seed.
inline std::set<poco::GuardId> singleton_reckless(const poco::Target& t,
                                                  const std::vector<poco::GuardId>& gMinus,
                                                  const poco::Corpus& corpus,
                                                  std::int64_t probeBudget) {
  std::set<poco::GuardId> out;
  for (poco::GuardId g : gMinus) {
    poco::ToggleVector tv = poco::toggles_for(t.ip, std::set<poco::GuardId>{g});
    for (const auto& s : corpus) {
      if (poco::is_crash(poco::execute(t, tv, s, probeBudget).verdict)) {
        out.insert(g);
        break;
      }
    }
  }
  return out;
}

}  // namespace oracle
