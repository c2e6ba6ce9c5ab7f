#pragma once

#include <algorithm>
#include <chrono>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "poco/cmin.hpp"
#include "poco/hierarchy.hpp"
#include "poco/reckless.hpp"

namespace poco {

struct SelectConfig {
  double wallBudgetSeconds = 7200.0;
  std::int32_t maxRounds = 10000;
  std::int64_t stepBudget = kDefaultStepBudget;
  std::uint64_t rngSeed = 0;  // recorded in manifests; selection itself is deterministic
};

struct RoundRecord {
  std::int32_t round = 0;
  std::vector<std::string> sBegin;
  std::vector<std::string> sEnd;
  std::vector<std::string> sNew;        // this round's cmin selection
  std::vector<std::string> sIncrement;  // sEnd \ sBegin
  std::vector<GuardId> disabledAtCmin;  // toggle vector the round's cmin ran under
  std::vector<GuardId> newlyDisabled;
  std::vector<GuardId> newlyReckless;
  std::vector<GuardId> passedRaw;    // Pi as reported by cmin
  std::vector<GuardId> passedFresh;  // Pi \ (R u G-)
  std::vector<GuardId> outermost;
  std::string aggregate;
  bool seedsStable = false;  // S' == S_new, compared before the update
  bool noReckless = false;
  bool noPassed = false;
  bool noOutermost = false;

  bool fixedPoint() const { return seedsStable && noReckless && noPassed && noOutermost; }
};

// Wall-time split per round, matching the composition report categories:
// cmin / crashing-reckless / converging-reckless / hierarchy parsing / guard ops.
struct RoundTiming {
  double cminSeconds = 0.0;
  double crashingSeconds = 0.0;
  double crashingProbeSeconds = 0.0;
  double convergingSeconds = 0.0;
  double hierarchySeconds = 0.0;
  double guardOpSeconds = 0.0;
  std::int64_t probes = 0;

  double total() const {
    return cminSeconds + crashingSeconds + convergingSeconds + hierarchySeconds +
           guardOpSeconds;
  }
};

struct SelectionResult {
  Corpus selected;  // S, in order of first admission
  std::vector<RoundRecord> trace;
  std::vector<RoundTiming> timings;
  std::string terminationReason;  // fixed_point | max_rounds | wall_budget
  std::vector<GuardId> finalDisabled;
  std::set<GuardId> reckless;
  std::vector<std::string> baseCminIds;  // phi(all-off) selection
  Corpus delta;                          // S \ baseCmin

  std::set<std::string> selectedIds() const {
    std::set<std::string> ids;
    for (const auto& s : selected) ids.insert(s.id);
    return ids;
  }
};

struct BaselinePreconditionError : std::runtime_error {
  std::vector<std::string> faultingSeeds;
  explicit BaselinePreconditionError(std::vector<std::string> seeds)
      : std::runtime_error("baseline execution faults or times out"),
        faultingSeeds(std::move(seeds)) {}
};

inline bool check_fixed_point(bool seedsStable, const std::set<GuardId>& piThisRound,
                              const std::set<GuardId>& omegaThisRound,
                              const std::set<GuardId>& recklessThisRound) {
  return seedsStable && recklessThisRound.empty() && piThisRound.empty() &&
         omegaThisRound.empty();
}

namespace detail {

inline std::vector<std::string> sortedIds(const std::set<std::string>& s) {
  return {s.begin(), s.end()};
}

class Clock {
 public:
  double lap() {
    auto now = std::chrono::steady_clock::now();
    double d = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return d;
  }
  double sinceStart() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
  std::chrono::steady_clock::time_point last_ = start_;
};

}  // namespace detail

inline SelectionResult select(const Target& t, const Corpus& corpus,
                              const SelectConfig& cfg = {}) {
  if (corpus.empty()) throw std::runtime_error("empty corpus");

  ExecutionCache cache;
  {
    std::vector<std::string> bad;
    auto tv = ToggleVector::allOff(t.guardCount());
    for (const auto& s : corpus) {
      auto out = execute(t, tv, s, cfg.stepBudget);
      if (is_crash(out.verdict)) bad.push_back(s.id);
      cache.put(s.id, tv.hash(), cfg.stepBudget, std::move(out));
    }
    if (!bad.empty()) throw BaselinePreconditionError(std::move(bad));
  }

  SelectionResult result;
  detail::Clock wall;

  detail::Clock hclk;
  GuardHierarchy h = extract_hierarchy(t.ip);
  double hierarchyParseSeconds = hclk.lap();

  std::set<std::string> sIds;          // ids in S
  std::set<std::string> sPrime;        // last round's selection
  std::set<GuardId> reckless;          // sticky R
  std::vector<GuardId> gMinusOrdered;  // disabling order
  std::set<GuardId> gMinusSet;
  std::set<GuardId> oNew;

  auto disable = [&](const std::set<GuardId>& gs) {
    for (GuardId g : gs) {
      gMinusOrdered.push_back(g);
      gMinusSet.insert(g);
      h.status[static_cast<std::size_t>(g)] = GuardStatus::Disabled;
    }
  };

  std::int32_t round = 0;
  while (true) {
    ++round;
    RoundRecord rec;
    RoundTiming timing;
    if (round == 1) timing.hierarchySeconds += hierarchyParseSeconds;
    rec.round = round;
    rec.sBegin = detail::sortedIds(sIds);
    rec.disabledAtCmin = gMinusOrdered;

    detail::Clock clk;
    CminResult cm = cmin(t, toggles_for(t.ip, gMinusSet), corpus, cfg.stepBudget, &cache);
    timing.cminSeconds += clk.lap();

    std::set<std::string> sNewIds = cm.selectedIds();
    bool seedsStable = sPrime == sNewIds;
    rec.seedsStable = seedsStable;
    rec.sNew = detail::sortedIds(sNewIds);
    rec.aggregate = cm.result.kind == VerdictKind::Ok        ? "ok"
                    : cm.result.kind == VerdictKind::Bug     ? "bug:" + cm.result.detail
                    : cm.result.kind == VerdictKind::Timeout ? "timeout"
                                                             : "fault:" + cm.result.detail;
    rec.passedRaw.assign(cm.passed.begin(), cm.passed.end());

    std::set<GuardId> recklessRound;
    if (is_crash(cm.result)) {
      clk.lap();
      auto crr = collect_crashing_reckless(t, corpus, gMinusOrdered, cfg.stepBudget, &cache);
      timing.crashingSeconds += clk.lap();
      timing.crashingProbeSeconds += crr.probeSeconds;
      timing.probes += crr.probes;
      recklessRound = crr.reckless;
    } else if (seedsStable) {
      clk.lap();
      recklessRound =
          collect_converging_reckless(t, cm.selected, gMinusSet, cfg.stepBudget, &cache);
      timing.convergingSeconds += clk.lap();
    }

    std::set<GuardId> piFresh;
    std::set<GuardId> omega;
    if (!recklessRound.empty()) {
      clk.lap();
      rec.newlyReckless.assign(recklessRound.begin(), recklessRound.end());
      reckless.insert(recklessRound.begin(), recklessRound.end());
      std::vector<GuardId> keep;
      for (GuardId g : gMinusOrdered) {
        if (!reckless.count(g)) keep.push_back(g);
      }
      gMinusOrdered = std::move(keep);
      gMinusSet = {gMinusOrdered.begin(), gMinusOrdered.end()};
      for (GuardId g : reckless) h.status[static_cast<std::size_t>(g)] = GuardStatus::Enabled;
      timing.guardOpSeconds += clk.lap();
    } else {
      clk.lap();
      for (const auto& s : cm.selected) {
        if (sIds.insert(s.id).second) result.selected.push_back(s);
      }
      sPrime = sNewIds;
      for (GuardId g : cm.passed) {
        if (!reckless.count(g) && !gMinusSet.count(g)) piFresh.insert(g);
      }
      if (!piFresh.empty()) {
        disable(piFresh);
        oNew.insert(piFresh.begin(), piFresh.end());
        rec.newlyDisabled.assign(piFresh.begin(), piFresh.end());
      } else {
        omega = collect_outermost(h, oNew);
        for (GuardId g : reckless) omega.erase(g);
        if (!omega.empty()) {
          disable(omega);
          oNew = omega;
          rec.newlyDisabled.assign(omega.begin(), omega.end());
        }
      }
      timing.guardOpSeconds += clk.lap();
    }

    rec.passedFresh.assign(piFresh.begin(), piFresh.end());
    rec.outermost.assign(omega.begin(), omega.end());
    rec.noReckless = recklessRound.empty();
    rec.noPassed = piFresh.empty();
    rec.noOutermost = omega.empty();
    rec.sEnd = detail::sortedIds(sIds);
    for (const auto& id : rec.sEnd) {
      if (std::find(rec.sBegin.begin(), rec.sBegin.end(), id) == rec.sBegin.end()) {
        rec.sIncrement.push_back(id);
      }
    }
    result.trace.push_back(rec);
    result.timings.push_back(timing);

    if (check_fixed_point(seedsStable, piFresh, omega, recklessRound)) {
      result.terminationReason = "fixed_point";
      break;
    }
    if (round >= cfg.maxRounds) {
      result.terminationReason = "max_rounds";
      break;
    }
    if (wall.sinceStart() >= cfg.wallBudgetSeconds) {
      result.terminationReason = "wall_budget";
      break;
    }
  }

  result.finalDisabled = gMinusOrdered;
  result.reckless = reckless;

  CminResult base = cmin(t, ToggleVector::allOff(t.guardCount()), corpus, cfg.stepBudget, &cache);
  for (const auto& s : base.selected) result.baseCminIds.push_back(s.id);
  std::set<std::string> baseIds(result.baseCminIds.begin(), result.baseCminIds.end());
  for (const auto& s : result.selected) {
    if (!baseIds.count(s.id)) result.delta.push_back(s);
  }
  return result;
}

}  // namespace poco
