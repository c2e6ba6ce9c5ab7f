#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace poco {

using StatementId = std::int32_t;
using BlockId = std::int32_t;
using GuardId = std::int32_t;

// Pseudo-guard dominating all top-level guards; permanently disabled.
inline constexpr GuardId kVirtualRoot = -1;

enum class ExprKind : std::uint8_t {
  IntLit,
  InputByte,  // input[a]
  InputLen,   // len(input)
  VarRef,
  ArrRead,  // sym[a]
  TogRef,   // tog(value)
  Or,
  And,
  Not,
  Neg,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  Add,
  Sub,
  Mul,
  Div,
  Mod,
};

struct Expr {
  ExprKind kind{};
  std::int32_t a = -1;  // child expr index
  std::int32_t b = -1;  // child expr index
  std::int64_t value = 0;
  std::int32_t sym = -1;  // symbol slot after semantic resolution
  int line = 0;
  int col = 0;
};

enum class StmtKind : std::uint8_t {
  VarDecl,   // var sym = e1;
  ArrDecl,   // arr sym[value];
  Assign,    // sym = e1;
  ArrStore,  // sym[e1] = e2;
  If,
  While,
  Crash,  // crash("label");
};

struct Stmt {
  StmtKind kind{};
  StatementId id = -1;
  std::int32_t sym = -1;
  std::int32_t e1 = -1;
  std::int32_t e2 = -1;
  std::int64_t value = 0;          // array size for ArrDecl
  std::vector<std::int32_t> body;  // then-branch / loop body
  std::vector<std::int32_t> elseBody;
  std::int32_t label = -1;   // crash label index
  GuardId guard = -1;        // for If/While
  int line = 0;
  int col = 0;
};

enum class GuardKind : std::uint8_t { If, While };

struct GuardSite {
  GuardId id = -1;
  StatementId stmt = -1;
  GuardKind kind{};
  std::int32_t condExpr = -1;  // original condition, before any toggle
  int line = 0;
  int col = 0;
};

struct FunctionDef {
  std::string name;
  bool hasInput = false;
  std::vector<std::int32_t> body;
  std::int32_t scalarSlots = 0;
  std::int32_t arraySlots = 0;
  int line = 0;
  int col = 0;
};

struct Program {
  std::vector<Expr> exprs;
  std::vector<Stmt> stmts;
  std::vector<std::string> symbols;  // variable names, per slot
  std::vector<std::string> labels;   // crash labels, lexical order
  std::vector<FunctionDef> functions;
  std::int32_t entry = -1;  // index of the function taking `input`
  std::vector<GuardSite> guards;  // lexical order, ids contiguous from 0
};

struct Diagnostic {
  int line = 0;
  int col = 0;
  std::string message;
};

inline std::string format_diagnostic(const std::string& file, const Diagnostic& d) {
  return file + ":" + std::to_string(d.line) + ":" + std::to_string(d.col) + ": " + d.message;
}

}  // namespace poco
