#pragma once

#include <set>
#include <utility>
#include <vector>

#include "poco/ast.hpp"

namespace poco {

struct BasicBlock {
  BlockId id = -1;
  std::vector<StatementId> stmts;
};

// Per-statement navigation data used by both CFG construction and execution,
// so the runtime records exactly the statically derived edges.
struct BranchTargets {
  BlockId header = -1;
  BlockId trueBlock = -1;
  BlockId falseBlock = -1;  // else block, or join when no else; loop exit for while
  BlockId join = -1;        // if-join / loop back target (== header for while)
  BlockId sink = -1;        // crash sink for Crash statements
};

struct Cfg {
  std::vector<BasicBlock> blocks;
  std::set<std::pair<BlockId, BlockId>> edges;
  BlockId entry = 0;
  BlockId exit = -1;
  std::vector<BranchTargets> targets;      // indexed by StatementId (program-wide)
  std::vector<BlockId> crashSinkForLabel;  // indexed by label, -1 if absent
};

namespace detail {

class CfgBuilder {
 public:
  CfgBuilder(const Program& p, const FunctionDef& fn) : p_(p), fn_(fn) {}

  Cfg run() {
    cfg_.targets.assign(p_.stmts.size(), BranchTargets{});
    cfg_.crashSinkForLabel.assign(p_.labels.size(), -1);
    cur_ = newBlock();
    cfg_.entry = cur_;
    emit(fn_.body);
    cfg_.exit = cur_;
    for (BlockId s : sinks_) cfg_.edges.insert({s, cfg_.exit});
    return std::move(cfg_);
  }

 private:
  BlockId newBlock() {
    BasicBlock b;
    b.id = static_cast<BlockId>(cfg_.blocks.size());
    cfg_.blocks.push_back(std::move(b));
    return cfg_.blocks.back().id;
  }

  void edge(BlockId a, BlockId b) { cfg_.edges.insert({a, b}); }

  void emit(const std::vector<std::int32_t>& body) {
    for (auto si : body) {
      const Stmt& s = p_.stmts[si];
      switch (s.kind) {
        case StmtKind::If: {
          cfg_.blocks[cur_].stmts.push_back(s.id);
          BranchTargets t;
          t.header = cur_;
          t.trueBlock = newBlock();
          edge(t.header, t.trueBlock);
          cur_ = t.trueBlock;
          emit(s.body);
          BlockId thenEnd = cur_;
          if (!s.elseBody.empty()) {
            t.falseBlock = newBlock();
            edge(t.header, t.falseBlock);
            cur_ = t.falseBlock;
            emit(s.elseBody);
            BlockId elseEnd = cur_;
            t.join = newBlock();
            edge(thenEnd, t.join);
            edge(elseEnd, t.join);
          } else {
            t.join = newBlock();
            t.falseBlock = t.join;
            edge(t.header, t.join);
            edge(thenEnd, t.join);
          }
          cur_ = t.join;
          cfg_.targets[s.id] = t;
          break;
        }
        case StmtKind::While: {
          BranchTargets t;
          t.header = newBlock();
          edge(cur_, t.header);
          cfg_.blocks[t.header].stmts.push_back(s.id);
          t.trueBlock = newBlock();
          edge(t.header, t.trueBlock);
          cur_ = t.trueBlock;
          emit(s.body);
          edge(cur_, t.header);
          t.join = t.header;
          t.falseBlock = newBlock();
          edge(t.header, t.falseBlock);
          cur_ = t.falseBlock;
          cfg_.targets[s.id] = t;
          break;
        }
        case StmtKind::Crash: {
          cfg_.blocks[cur_].stmts.push_back(s.id);
          BlockId& sink = cfg_.crashSinkForLabel[s.label];
          if (sink < 0) {
            sink = newBlock();
            sinks_.push_back(sink);
          }
          edge(cur_, sink);
          cfg_.targets[s.id].sink = sink;
          cfg_.targets[s.id].header = cur_;
          cur_ = newBlock();  // unreachable continuation
          break;
        }
        default:
          cfg_.blocks[cur_].stmts.push_back(s.id);
          break;
      }
    }
  }

  const Program& p_;
  const FunctionDef& fn_;
  Cfg cfg_;
  BlockId cur_ = -1;
  std::vector<BlockId> sinks_;
};

}  // namespace detail

inline Cfg build_cfg(const Program& p, const FunctionDef& fn) {
  return detail::CfgBuilder(p, fn).run();
}

inline Cfg build_entry_cfg(const Program& p) {
  return build_cfg(p, p.functions[static_cast<std::size_t>(p.entry)]);
}

}  // namespace poco
