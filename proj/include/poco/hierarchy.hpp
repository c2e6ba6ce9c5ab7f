#pragma once

#include <deque>
#include <set>
#include <stdexcept>

#include "poco/instrument.hpp"

namespace poco {

// Outermost guard collection: BFS from the obstacle guards found since the
// last scan (or from the virtual root when none exist yet). A successor is
// outermost iff it is enabled and not itself in oNew; disabled or in-oNew
// successors push the boundary deeper.
inline std::set<GuardId> collect_outermost(const GuardHierarchy& h,
                                           const std::set<GuardId>& oNew) {
  std::deque<GuardId> dq(oNew.begin(), oNew.end());
  if (dq.empty()) dq.push_back(kVirtualRoot);
  std::set<GuardId> checked;
  std::set<GuardId> outermost;
  while (!dq.empty()) {
    GuardId g = dq.front();
    dq.pop_front();
    if (checked.count(g)) continue;
    for (GuardId succ : h.successors(g)) {
      if (!oNew.count(succ) && h.enabled(succ)) {
        outermost.insert(succ);
      } else {
        dq.push_back(succ);
      }
    }
    checked.insert(g);
  }
  return outermost;
}

// Enabled and recognized as passed or outermost.
inline bool is_obstacle(GuardId g, const GuardHierarchy& h, const std::set<GuardId>& passed,
                        const std::set<GuardId>& outermost) {
  if (g < 0 || g >= h.guardCount) throw std::runtime_error("unknown guard id");
  return h.enabled(g) && (passed.count(g) || outermost.count(g));
}

}  // namespace poco
