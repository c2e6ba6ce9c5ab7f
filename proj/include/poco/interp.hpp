#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "poco/cfg.hpp"
#include "poco/instrument.hpp"

namespace poco {

struct Seed {
  std::string id;
  std::string bytes;

  std::size_t size() const { return bytes.size(); }
};

using Corpus = std::vector<Seed>;

// true = toggle on = guard disabled
struct ToggleVector {
  std::vector<std::uint8_t> bits;

  static ToggleVector allOff(std::size_t guardCount) {
    ToggleVector tv;
    tv.bits.assign(guardCount, 0);
    return tv;
  }

  bool on(GuardId g) const {
    return g >= 0 && static_cast<std::size_t>(g) < bits.size() && bits[static_cast<std::size_t>(g)];
  }

  void set(GuardId g, bool v) { bits[static_cast<std::size_t>(g)] = v ? 1 : 0; }

  std::uint64_t hash() const {
    std::uint64_t h = 1469598103934665603ull;
    for (auto b : bits) {
      h ^= b;
      h *= 1099511628211ull;
    }
    return h;
  }
};

inline ToggleVector toggles_for(const InstrumentedProgram& ip, const std::set<GuardId>& on) {
  ToggleVector tv = ToggleVector::allOff(ip.program.guards.size());
  for (GuardId g : on) {
    if (ip.toggleable[static_cast<std::size_t>(g)]) tv.set(g, true);
  }
  return tv;
}

enum class VerdictKind : std::uint8_t { Ok = 0, Bug = 1, Timeout = 2, Fault = 3 };

struct Verdict {
  VerdictKind kind = VerdictKind::Ok;
  std::string detail;  // bug label or fault kind

  bool operator==(const Verdict&) const = default;
};

// fault/timeout is the "crash" signal of reckless detection; bug findings are not.
inline bool is_crash(const Verdict& v) {
  return v.kind == VerdictKind::Fault || v.kind == VerdictKind::Timeout;
}

using EdgeSet = std::set<std::pair<BlockId, BlockId>>;

struct ExecOutcome {
  Verdict verdict;
  EdgeSet edges;
  std::vector<std::uint8_t> condSat;        // original condition held at least once
  std::vector<std::uint8_t> branchEntered;  // true-branch entered, by condition or toggle
  std::int64_t steps = 0;

  bool operator==(const ExecOutcome&) const = default;
};

inline constexpr std::int64_t kDefaultStepBudget = 100000;

namespace detail {

struct FaultSignal {
  const char* kind;
};
struct BugSignal {
  std::int32_t label;
};
struct TimeoutSignal {};

class Interp {
 public:
  Interp(const InstrumentedProgram& ip, const Cfg& cfg, const ToggleVector& tv,
         const std::string& input, std::int64_t budget)
      : p_(ip.program), toggleable_(ip.toggleable), cfg_(cfg), tv_(tv), input_(input),
        budget_(budget) {}

  ExecOutcome run() {
    const FunctionDef& fn = p_.functions[static_cast<std::size_t>(p_.entry)];
    out_.condSat.assign(p_.guards.size(), 0);
    out_.branchEntered.assign(p_.guards.size(), 0);
    scalars_.assign(static_cast<std::size_t>(fn.scalarSlots), 0);
    arrays_.assign(static_cast<std::size_t>(fn.arraySlots), {});
    cur_ = cfg_.entry;
    try {
      exec(fn.body);
    } catch (const BugSignal& b) {
      out_.verdict = {VerdictKind::Bug, p_.labels[static_cast<std::size_t>(b.label)]};
    } catch (const FaultSignal& f) {
      out_.verdict = {VerdictKind::Fault, f.kind};
    } catch (const TimeoutSignal&) {
      out_.verdict = {VerdictKind::Timeout, ""};
    }
    out_.steps = steps_;
    return std::move(out_);
  }

 private:
  void step() {
    if (++steps_ >= budget_) {
      steps_ = budget_;
      throw TimeoutSignal{};
    }
  }

  void transition(BlockId to) {
    if (to != cur_) {
      out_.edges.insert({cur_, to});
      cur_ = to;
    }
  }

  void exec(const std::vector<std::int32_t>& body) {
    for (auto si : body) {
      const Stmt& s = p_.stmts[si];
      switch (s.kind) {
        case StmtKind::VarDecl:
        case StmtKind::Assign:
          step();
          scalars_[static_cast<std::size_t>(s.value)] = eval(s.e1);
          break;
        case StmtKind::ArrDecl:
          step();
          arrays_[static_cast<std::size_t>(s.e2)].assign(static_cast<std::size_t>(s.value), 0);
          break;
        case StmtKind::ArrStore: {
          step();
          std::int64_t idx = eval(s.e1);
          std::int64_t v = eval(s.e2);
          auto& arr = arrays_[static_cast<std::size_t>(s.value)];
          if (idx < 0 || static_cast<std::size_t>(idx) >= arr.size()) {
            throw FaultSignal{"index-out-of-bounds"};
          }
          arr[static_cast<std::size_t>(idx)] = v;
          break;
        }
        case StmtKind::Crash: {
          step();
          const auto& t = cfg_.targets[static_cast<std::size_t>(s.id)];
          out_.edges.insert({cur_, t.sink});
          throw BugSignal{s.label};
        }
        case StmtKind::If: {
          const auto& t = cfg_.targets[static_cast<std::size_t>(s.id)];
          bool control = evalGuard(s);
          if (control) {
            out_.branchEntered[static_cast<std::size_t>(s.guard)] = 1;
            transition(t.trueBlock);
            exec(s.body);
            transition(t.join);
          } else {
            transition(t.falseBlock);
            if (!s.elseBody.empty()) {
              exec(s.elseBody);
              transition(t.join);
            }
          }
          break;
        }
        case StmtKind::While: {
          const auto& t = cfg_.targets[static_cast<std::size_t>(s.id)];
          transition(t.header);
          while (true) {
            bool control = evalGuard(s);
            if (!control) {
              transition(t.falseBlock);
              break;
            }
            out_.branchEntered[static_cast<std::size_t>(s.guard)] = 1;
            transition(t.trueBlock);
            exec(s.body);
            transition(t.header);
          }
          break;
        }
      }
    }
  }

  // Evaluates the effective condition tog(g) || cond(g). The original
  // condition is side-effect-free, so it is always evaluated for condSat
  // bookkeeping; if that evaluation would itself fault while the toggle
  // forces entry, condSat stays false.
  bool evalGuard(const Stmt& s) {
    step();
    auto gi = static_cast<std::size_t>(s.guard);
    bool tog = toggleable_[gi] && tv_.on(s.guard);
    if (tog) {
      try {
        if (eval(s.e1) != 0) out_.condSat[gi] = 1;
      } catch (const FaultSignal&) {
      }
      return true;
    }
    bool v = eval(s.e1) != 0;
    if (v) out_.condSat[gi] = 1;
    return v;
  }

  std::int64_t eval(std::int32_t ei) {
    const Expr& e = p_.exprs[static_cast<std::size_t>(ei)];
    switch (e.kind) {
      case ExprKind::IntLit: return e.value;
      case ExprKind::InputLen: return static_cast<std::int64_t>(input_.size());
      case ExprKind::TogRef: return tv_.on(static_cast<GuardId>(e.value)) ? 1 : 0;
      case ExprKind::InputByte: {
        std::int64_t i = eval(e.a);
        if (i < 0 || static_cast<std::size_t>(i) >= input_.size()) return 0;
        return static_cast<unsigned char>(input_[static_cast<std::size_t>(i)]);
      }
      case ExprKind::VarRef: return scalars_[static_cast<std::size_t>(e.value)];
      case ExprKind::ArrRead: {
        std::int64_t i = eval(e.a);
        const auto& arr = arrays_[static_cast<std::size_t>(e.value)];
        if (i < 0 || static_cast<std::size_t>(i) >= arr.size()) {
          throw FaultSignal{"index-out-of-bounds"};
        }
        return arr[static_cast<std::size_t>(i)];
      }
      case ExprKind::Or: return (eval(e.a) != 0 || eval(e.b) != 0) ? 1 : 0;
      case ExprKind::And: return (eval(e.a) != 0 && eval(e.b) != 0) ? 1 : 0;
      case ExprKind::Not: return eval(e.a) == 0 ? 1 : 0;
      case ExprKind::Neg: return negWrap(eval(e.a));
      default: {
        std::int64_t a = eval(e.a);
        std::int64_t b = eval(e.b);
        switch (e.kind) {
          case ExprKind::Eq: return a == b;
          case ExprKind::Ne: return a != b;
          case ExprKind::Lt: return a < b;
          case ExprKind::Le: return a <= b;
          case ExprKind::Gt: return a > b;
          case ExprKind::Ge: return a >= b;
          case ExprKind::Add: return addWrap(a, b);
          case ExprKind::Sub: return addWrap(a, negWrap(b));
          case ExprKind::Mul:
            return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) *
                                             static_cast<std::uint64_t>(b));
          case ExprKind::Div:
            if (b == 0) throw FaultSignal{"division-by-zero"};
            if (a == INT64_MIN && b == -1) return a;
            return a / b;
          case ExprKind::Mod:
            if (b == 0) throw FaultSignal{"modulo-by-zero"};
            if (a == INT64_MIN && b == -1) return 0;
            return a % b;
          default: return 0;
        }
      }
    }
  }

  static std::int64_t addWrap(std::int64_t a, std::int64_t b) {
    return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) +
                                     static_cast<std::uint64_t>(b));
  }
  static std::int64_t negWrap(std::int64_t a) {
    return static_cast<std::int64_t>(~static_cast<std::uint64_t>(a) + 1);
  }

  const Program& p_;
  const std::vector<bool>& toggleable_;
  const Cfg& cfg_;
  const ToggleVector& tv_;
  const std::string& input_;
  std::int64_t budget_;
  std::int64_t steps_ = 0;
  BlockId cur_ = -1;
  ExecOutcome out_;
  std::vector<std::int64_t> scalars_;
  std::vector<std::vector<std::int64_t>> arrays_;
};

}  // namespace detail

// Executable bundle: instrumented program plus the entry function's CFG.
struct Target {
  InstrumentedProgram ip;
  Cfg cfg;

  static Target from(Program p, bool toggleLoops = false) {
    Target t;
    t.ip = insert_toggles(std::move(p), toggleLoops);
    t.cfg = build_entry_cfg(t.ip.program);
    return t;
  }

  std::size_t guardCount() const { return ip.program.guards.size(); }
};

inline ExecOutcome execute(const Target& t, const ToggleVector& tv, const Seed& seed,
                           std::int64_t budget = kDefaultStepBudget) {
  return detail::Interp(t.ip, t.cfg, tv, seed.bytes, budget).run();
}

inline ExecOutcome execute_base(const Target& t, const Seed& seed,
                                std::int64_t budget = kDefaultStepBudget) {
  return execute(t, ToggleVector::allOff(t.guardCount()), seed, budget);
}

// Keyed by (seed id, toggle-vector hash, budget). Observationally invisible.
class ExecutionCache {
 public:
  const ExecOutcome* find(const std::string& id, std::uint64_t tvHash,
                          std::int64_t budget) const {
    auto it = map_.find(key(id, tvHash, budget));
    return it == map_.end() ? nullptr : it->second.get();
  }

  const ExecOutcome* put(const std::string& id, std::uint64_t tvHash, std::int64_t budget,
                         ExecOutcome out) {
    auto& slot = map_[key(id, tvHash, budget)];
    slot = std::make_shared<ExecOutcome>(std::move(out));
    return slot.get();
  }

  std::size_t size() const { return map_.size(); }

 private:
  static std::string key(const std::string& id, std::uint64_t tvHash, std::int64_t budget) {
    return id + "#" + std::to_string(tvHash) + "#" + std::to_string(budget);
  }

  std::map<std::string, std::shared_ptr<const ExecOutcome>> map_;
};

struct CorpusOutcome {
  std::vector<std::pair<std::string, const ExecOutcome*>> bySeed;  // corpus order
  EdgeSet mergedEdges;
  std::vector<std::uint8_t> mergedCondSat;
  std::vector<std::uint8_t> mergedBranchEntered;
  Verdict aggregate;  // worst verdict under ok < bug < timeout < fault
  std::int64_t executions = 0;  // cache misses, i.e. actual runs

  // Keeps per-seed outcomes alive when no external cache was supplied.
  std::vector<std::shared_ptr<const ExecOutcome>> owned;
};

inline CorpusOutcome execute_corpus(const Target& t, const ToggleVector& tv,
                                    const Corpus& corpus,
                                    std::int64_t budget = kDefaultStepBudget,
                                    ExecutionCache* cache = nullptr) {
  if (corpus.empty()) throw std::runtime_error("empty corpus");
  CorpusOutcome co;
  co.mergedCondSat.assign(t.guardCount(), 0);
  co.mergedBranchEntered.assign(t.guardCount(), 0);
  std::uint64_t tvHash = tv.hash();
  for (const auto& seed : corpus) {
    const ExecOutcome* out = cache ? cache->find(seed.id, tvHash, budget) : nullptr;
    if (!out) {
      ++co.executions;
      if (cache) {
        out = cache->put(seed.id, tvHash, budget, execute(t, tv, seed, budget));
      } else {
        co.owned.push_back(std::make_shared<ExecOutcome>(execute(t, tv, seed, budget)));
        out = co.owned.back().get();
      }
    }
    co.bySeed.emplace_back(seed.id, out);
    co.mergedEdges.insert(out->edges.begin(), out->edges.end());
    for (std::size_t g = 0; g < t.guardCount(); ++g) {
      co.mergedCondSat[g] |= out->condSat[g];
      co.mergedBranchEntered[g] |= out->branchEntered[g];
    }
    if (static_cast<int>(out->verdict.kind) > static_cast<int>(co.aggregate.kind)) {
      co.aggregate = out->verdict;
    }
  }
  return co;
}

}  // namespace poco
