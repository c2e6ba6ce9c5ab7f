#pragma once

#include <algorithm>
#include <chrono>
#include <set>
#include <vector>

#include "poco/interp.hpp"

namespace poco {

inline constexpr std::int64_t kProbeBudgetFactor = 10;

struct CrashingRecklessResult {
  std::set<GuardId> reckless;
  std::int64_t probes = 0;       // probe executions of the whole corpus
  double probeSeconds = 0.0;     // wall time spent inside probe executions
  bool preconditionHeld = true;  // full gMinus run did crash
};

// Windowed binary search over the disabled list, ordered by disabling time.
// Probes run under an extended budget; on a crash with a singleton window the
// guard is blamed, otherwise the window halves; on a clean probe the window's
// guards stay disabled and the window doubles past them.
inline CrashingRecklessResult collect_crashing_reckless(
    const Target& t, const Corpus& corpus, const std::vector<GuardId>& gMinus,
    std::int64_t budget = kDefaultStepBudget, ExecutionCache* cache = nullptr) {
  CrashingRecklessResult res;
  std::int64_t probeBudget = budget * kProbeBudgetFactor;
  auto probe = [&](const std::set<GuardId>& disabled) {
    auto t0 = std::chrono::steady_clock::now();
    auto co = execute_corpus(t, toggles_for(t.ip, disabled), corpus, probeBudget, cache);
    res.probeSeconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ++res.probes;
    return is_crash(co.aggregate);
  };

  std::set<GuardId> full(gMinus.begin(), gMinus.end());
  if (!probe(full)) {
    res.preconditionHeld = false;
    return res;
  }

  std::set<GuardId> tmp;
  std::int64_t pos = -1;
  std::int64_t len = 1;
  const auto n = static_cast<std::int64_t>(gMinus.size());
  while (pos + 1 < n) {
    std::int64_t lo = pos + 1;
    std::int64_t hi = std::min(lo + len, n);
    std::set<GuardId> window(gMinus.begin() + lo, gMinus.begin() + hi);
    for (GuardId g : window) tmp.insert(g);
    if (probe(tmp)) {
      for (GuardId g : window) tmp.erase(g);
      if (len == 1) {
        res.reckless.insert(window.begin(), window.end());
        pos += 1;
      } else {
        len /= 2;
      }
    } else {
      pos += len;
      len *= 2;
    }
  }
  return res;
}

// Converging-Reckless: disabled guards lying on the executed path of the
// newly selected seeds. Triggered only on a plausible fixed point.
inline std::set<GuardId> collect_converging_reckless(const Target& t, const Corpus& sNew,
                                                     const std::set<GuardId>& gMinus,
                                                     std::int64_t budget = kDefaultStepBudget,
                                                     ExecutionCache* cache = nullptr) {
  std::set<GuardId> reckless;
  if (gMinus.empty() || sNew.empty()) return reckless;
  auto co = execute_corpus(t, toggles_for(t.ip, gMinus), sNew, budget, cache);
  for (GuardId g : gMinus) {
    if (co.mergedBranchEntered[static_cast<std::size_t>(g)]) reckless.insert(g);
  }
  return reckless;
}

}  // namespace poco
