#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "poco/interp.hpp"

namespace poco {

inline constexpr std::size_t kMutationsPerEntry = 64;  // fixed energy, no favoritism
inline constexpr std::size_t kMaxInputLength = 4096;
inline constexpr int kMaxHavocStack = 8;

struct CrashRecord {
  std::string label;
  std::int64_t execIndex = 0;
  std::string input;
};

struct FuzzReport {
  std::int64_t executions = 0;
  std::vector<std::string> queue;  // inputs, admission order; initial seeds first
  std::vector<CrashRecord> crashes;  // first discovery per label
  std::vector<std::pair<std::int64_t, std::int64_t>> edgeTimeline;
  EdgeSet finalEdges;

  std::set<std::string> crashLabels() const {
    std::set<std::string> out;
    for (const auto& c : crashes) out.insert(c.label);
    return out;
  }

  std::optional<std::int64_t> execsToBug(const std::string& label) const {
    for (const auto& c : crashes) {
      if (c.label == label) return c.execIndex;
    }
    return std::nullopt;
  }
};

namespace detail {

class Mutator {
 public:
  explicit Mutator(std::mt19937_64& rng) : rng_(rng) {}

  std::string mutate(const std::string& parent, const std::vector<std::string>& queue) {
    switch (pick(6)) {
      case 0: return basic(parent, 0);
      case 1: return basic(parent, 1);
      case 2: return basic(parent, 2);
      case 3: return basic(parent, 3);
      case 4: return splice(parent, queue);
      default: {
        std::string s = parent;
        int stack = 2 + static_cast<int>(pick(kMaxHavocStack - 1));
        for (int i = 0; i < stack; ++i) s = basic(s, pick(4));
        return s;
      }
    }
  }

 private:
  std::size_t pick(std::size_t n) { return rng_() % n; }

  std::string basic(std::string s, std::size_t op) {
    if (s.empty() && op != 2) op = 2;  // only insertion applies to empty inputs
    switch (op) {
      case 0: {  // single-bit flip
        std::size_t i = pick(s.size());
        s[i] = static_cast<char>(s[i] ^ (1 << pick(8)));
        return s;
      }
      case 1: {  // byte replace
        std::size_t i = pick(s.size());
        s[i] = static_cast<char>(pick(256));
        return s;
      }
      case 2: {  // byte insert
        if (s.size() >= kMaxInputLength) return s;
        std::size_t i = pick(s.size() + 1);
        s.insert(s.begin() + static_cast<std::ptrdiff_t>(i), static_cast<char>(pick(256)));
        return s;
      }
      default: {  // byte delete
        std::size_t i = pick(s.size());
        s.erase(s.begin() + static_cast<std::ptrdiff_t>(i));
        return s;
      }
    }
  }

  std::string splice(const std::string& a, const std::vector<std::string>& queue) {
    const std::string& b = queue[pick(queue.size())];
    std::string out = a.substr(0, pick(a.size() + 1));
    out += b.substr(pick(b.size() + 1));
    if (out.size() > kMaxInputLength) out.resize(kMaxInputLength);
    return out;
  }

  std::mt19937_64& rng_;
};

}  // namespace detail

// Deterministic mutational greybox loop: round-robin queue, fixed energy per
// entry, offspring admitted iff they contribute at least one new edge.
// Fuzzing always runs the un-toggled target.
inline FuzzReport fuzz(const Target& t, const Corpus& initialSeeds,
                       std::int64_t budgetExecutions, std::uint64_t rngSeed,
                       std::int64_t stepBudget = kDefaultStepBudget) {
  if (initialSeeds.empty()) throw std::runtime_error("empty initial seeds");
  std::mt19937_64 rng(rngSeed);
  detail::Mutator mut(rng);
  ToggleVector tv = ToggleVector::allOff(t.guardCount());

  FuzzReport rep;
  std::set<std::string> seenLabels;

  auto run = [&](const std::string& input) -> std::optional<EdgeSet> {
    if (rep.executions >= budgetExecutions) return std::nullopt;
    Seed s{"", input};
    ExecOutcome out = execute(t, tv, s, stepBudget);
    std::int64_t idx = rep.executions++;
    if (out.verdict.kind == VerdictKind::Bug && seenLabels.insert(out.verdict.detail).second) {
      rep.crashes.push_back({out.verdict.detail, idx, input});
    }
    std::size_t before = rep.finalEdges.size();
    rep.finalEdges.insert(out.edges.begin(), out.edges.end());
    if (rep.finalEdges.size() > before) {
      rep.edgeTimeline.emplace_back(idx, static_cast<std::int64_t>(rep.finalEdges.size()));
      return out.edges;
    }
    return EdgeSet{};
  };

  for (const auto& s : initialSeeds) {
    rep.queue.push_back(s.bytes);
    run(s.bytes);
  }

  std::size_t qi = 0;
  while (rep.executions < budgetExecutions) {
    const std::string parent = rep.queue[qi];
    for (std::size_t m = 0; m < kMutationsPerEntry && rep.executions < budgetExecutions; ++m) {
      std::string child = mut.mutate(parent, rep.queue);
      std::size_t edgesBefore = rep.finalEdges.size();
      auto res = run(child);
      if (res && rep.finalEdges.size() > edgesBefore) rep.queue.push_back(std::move(child));
    }
    qi = (qi + 1) % rep.queue.size();
  }
  return rep;
}

struct SeedImprovementTrial {
  std::uint64_t rngSeed = 0;
  std::vector<std::string> deltaFindings;  // findings of augmented minus base
};

struct SeedImprovementReport {
  bool holds = false;
  std::vector<SeedImprovementTrial> trials;
  std::int64_t trialsWithGain = 0;
};

inline std::set<std::string> findings_of(const FuzzReport& r) {
  std::set<std::string> f;
  for (const auto& e : r.finalEdges) {
    f.insert("edge:" + std::to_string(e.first) + "->" + std::to_string(e.second));
  }
  for (const auto& l : r.crashLabels()) f.insert("bug:" + l);
  return f;
}

// Seed-Improvement check: paired-rng campaigns with and without the candidate;
// holds iff the augmented run finds something extra in a majority of trials.
inline SeedImprovementReport seed_improvement(const Target& t, const Corpus& baseSet,
                                              const Seed& candidate,
                                              std::int64_t budgetExecutions,
                                              const std::vector<std::uint64_t>& rngSeeds,
                                              std::int64_t stepBudget = kDefaultStepBudget) {
  SeedImprovementReport rep;
  Corpus augmented = baseSet;
  augmented.push_back(candidate);
  for (auto seed : rngSeeds) {
    auto base = findings_of(fuzz(t, baseSet, budgetExecutions, seed, stepBudget));
    auto aug = findings_of(fuzz(t, augmented, budgetExecutions, seed, stepBudget));
    SeedImprovementTrial trial;
    trial.rngSeed = seed;
    std::set_difference(aug.begin(), aug.end(), base.begin(), base.end(),
                        std::back_inserter(trial.deltaFindings));
    if (!trial.deltaFindings.empty()) ++rep.trialsWithGain;
    rep.trials.push_back(std::move(trial));
  }
  rep.holds = rep.trialsWithGain * 2 > static_cast<std::int64_t>(rngSeeds.size());
  return rep;
}

}  // namespace poco
