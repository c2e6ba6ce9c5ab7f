#pragma once

#include <utility>
#include <vector>

#include "poco/ast.hpp"

namespace poco {

// Program plus per-guard toggleability. Toggles are runtime data: the
// effective condition of a toggleable guard g is tog(g) || cond(g).
struct InstrumentedProgram {
  Program program;
  std::vector<bool> toggleable;
  std::int32_t toggleCount = 0;

  const std::vector<GuardSite>& guards() const { return program.guards; }
};

inline InstrumentedProgram insert_toggles(Program program, bool toggleLoops = false) {
  InstrumentedProgram ip;
  ip.toggleable.assign(program.guards.size(), false);
  for (const auto& g : program.guards) {
    bool t = g.kind == GuardKind::If || toggleLoops;
    ip.toggleable[static_cast<std::size_t>(g.id)] = t;
    if (t) ++ip.toggleCount;
  }
  ip.program = std::move(program);
  return ip;
}

enum class GuardStatus : std::uint8_t { Enabled, Disabled };

// H = <G, E, Sigma>: domination forest over guards plus a status map.
// Top-level guards are children of a permanently disabled virtual root.
struct GuardHierarchy {
  std::int32_t guardCount = 0;
  std::vector<GuardId> parent;                // kVirtualRoot for top-level guards
  std::vector<std::vector<GuardId>> children;  // per guard, lexical order
  std::vector<GuardId> roots;                  // children of the virtual root
  std::vector<GuardStatus> status;             // defaults to Enabled

  const std::vector<GuardId>& successors(GuardId g) const {
    return g == kVirtualRoot ? roots : children[static_cast<std::size_t>(g)];
  }

  bool enabled(GuardId g) const {
    if (g == kVirtualRoot) return false;
    return status[static_cast<std::size_t>(g)] == GuardStatus::Enabled;
  }

  std::vector<std::pair<GuardId, GuardId>> edges() const {
    std::vector<std::pair<GuardId, GuardId>> out;
    for (GuardId g = 0; g < guardCount; ++g) {
      for (GuardId c : children[static_cast<std::size_t>(g)]) out.emplace_back(g, c);
    }
    return out;
  }
};

namespace detail {

inline void collectHierarchy(const Program& p, const std::vector<std::int32_t>& body,
                             GuardId dominator, GuardHierarchy& h) {
  for (auto si : body) {
    const Stmt& s = p.stmts[si];
    if (s.kind == StmtKind::If || s.kind == StmtKind::While) {
      h.parent[static_cast<std::size_t>(s.guard)] = dominator;
      if (dominator == kVirtualRoot) {
        h.roots.push_back(s.guard);
      } else {
        h.children[static_cast<std::size_t>(dominator)].push_back(s.guard);
      }
      collectHierarchy(p, s.body, s.guard, h);
      collectHierarchy(p, s.elseBody, s.guard, h);
    }
  }
}

}  // namespace detail

// Domination from lexical nesting: (g, g') is an edge iff g' sits directly
// inside a branch or body of g with no intervening guard.
inline GuardHierarchy extract_hierarchy(const InstrumentedProgram& ip) {
  const Program& p = ip.program;
  GuardHierarchy h;
  h.guardCount = static_cast<std::int32_t>(p.guards.size());
  h.parent.assign(p.guards.size(), kVirtualRoot);
  h.children.assign(p.guards.size(), {});
  h.status.assign(p.guards.size(), GuardStatus::Enabled);
  for (const auto& fn : p.functions) detail::collectHierarchy(p, fn.body, kVirtualRoot, h);
  return h;
}

}  // namespace poco
