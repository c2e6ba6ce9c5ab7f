#pragma once

#include <set>
#include <string>
#include <vector>

#include "poco/interp.hpp"

namespace poco {

struct CminResult {
  Corpus selected;              // order of greedy addition
  std::set<GuardId> passed;     // condSat over the selected seeds
  Verdict result;               // worst verdict over the whole corpus
  CorpusOutcome outcomes;

  std::set<std::string> selectedIds() const {
    std::set<std::string> ids;
    for (const auto& s : selected) ids.insert(s.id);
    return ids;
  }
};

// afl-cmin-style greedy minimizer: walk edges in canonical (sorted) order;
// for each yet-uncovered edge keep the smallest covering seed, ties broken by
// lexicographically smallest id. Coverage-preserving by construction.
inline CminResult cmin(const Target& t, const ToggleVector& tv, const Corpus& corpus,
                       std::int64_t budget = kDefaultStepBudget,
                       ExecutionCache* cache = nullptr) {
  if (corpus.empty()) throw std::runtime_error("empty corpus");
  CminResult r;
  r.outcomes = execute_corpus(t, tv, corpus, budget, cache);
  r.result = r.outcomes.aggregate;

  EdgeSet covered;
  std::set<std::string> picked;
  for (const auto& edge : r.outcomes.mergedEdges) {
    if (covered.count(edge)) continue;
    const Seed* best = nullptr;
    const ExecOutcome* bestOut = nullptr;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const ExecOutcome* out = r.outcomes.bySeed[i].second;
      if (!out->edges.count(edge)) continue;
      const Seed& s = corpus[i];
      if (!best || s.size() < best->size() ||
          (s.size() == best->size() && s.id < best->id)) {
        best = &s;
        bestOut = out;
      }
    }
    // mergedEdges come from the corpus, so a covering seed always exists
    covered.insert(bestOut->edges.begin(), bestOut->edges.end());
    if (picked.insert(best->id).second) r.selected.push_back(*best);
  }

  if (r.selected.empty()) {
    // Edge-free program: nothing to cover, keep one representative seed so the
    // selection is never empty (smallest size, then smallest id).
    const Seed* best = &corpus.front();
    for (const auto& s : corpus) {
      if (s.size() < best->size() || (s.size() == best->size() && s.id < best->id)) {
        best = &s;
      }
    }
    picked.insert(best->id);
    r.selected.push_back(*best);
  }

  for (std::size_t i = 0; i < corpus.size(); ++i) {
    if (!picked.count(corpus[i].id)) continue;
    const ExecOutcome* out = r.outcomes.bySeed[i].second;
    for (std::size_t g = 0; g < out->condSat.size(); ++g) {
      if (out->condSat[g]) r.passed.insert(static_cast<GuardId>(g));
    }
  }
  return r;
}

}  // namespace poco
