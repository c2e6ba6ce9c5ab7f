#pragma once

#include <string>

#include "poco/ast.hpp"

namespace poco {

namespace detail {

inline int precedence(ExprKind k) {
  switch (k) {
    case ExprKind::Or: return 1;
    case ExprKind::And: return 2;
    case ExprKind::Eq:
    case ExprKind::Ne:
    case ExprKind::Lt:
    case ExprKind::Le:
    case ExprKind::Gt:
    case ExprKind::Ge: return 3;
    case ExprKind::Add:
    case ExprKind::Sub: return 4;
    case ExprKind::Mul:
    case ExprKind::Div:
    case ExprKind::Mod: return 5;
    case ExprKind::Not:
    case ExprKind::Neg: return 6;
    default: return 7;
  }
}

inline const char* opText(ExprKind k) {
  switch (k) {
    case ExprKind::Or: return " || ";
    case ExprKind::And: return " && ";
    case ExprKind::Eq: return " == ";
    case ExprKind::Ne: return " != ";
    case ExprKind::Lt: return " < ";
    case ExprKind::Le: return " <= ";
    case ExprKind::Gt: return " > ";
    case ExprKind::Ge: return " >= ";
    case ExprKind::Add: return " + ";
    case ExprKind::Sub: return " - ";
    case ExprKind::Mul: return " * ";
    case ExprKind::Div: return " / ";
    case ExprKind::Mod: return " % ";
    default: return "?";
  }
}

class Printer {
 public:
  explicit Printer(const Program& p) : p_(p) {}

  std::string run() {
    for (std::size_t i = 0; i < p_.functions.size(); ++i) {
      const auto& fn = p_.functions[i];
      if (i) out_ += "\n";
      out_ += "fn " + fn.name + "(";
      if (fn.hasInput) out_ += "input";
      out_ += ") {\n";
      stmts(fn.body, 1);
      out_ += "}\n";
    }
    return std::move(out_);
  }

 private:
  void indent(int depth) { out_.append(static_cast<std::size_t>(depth) * 2, ' '); }

  void stmts(const std::vector<std::int32_t>& body, int depth) {
    for (auto si : body) stmt(p_.stmts[si], depth);
  }

  void stmt(const Stmt& s, int depth) {
    indent(depth);
    switch (s.kind) {
      case StmtKind::VarDecl:
        out_ += "var " + p_.symbols[s.sym] + " = ";
        expr(s.e1, 0);
        out_ += ";\n";
        break;
      case StmtKind::ArrDecl:
        out_ += "arr " + p_.symbols[s.sym] + "[" + std::to_string(s.value) + "];\n";
        break;
      case StmtKind::Assign:
        out_ += p_.symbols[s.sym] + " = ";
        expr(s.e1, 0);
        out_ += ";\n";
        break;
      case StmtKind::ArrStore:
        out_ += p_.symbols[s.sym] + "[";
        expr(s.e1, 0);
        out_ += "] = ";
        expr(s.e2, 0);
        out_ += ";\n";
        break;
      case StmtKind::Crash:
        out_ += "crash(\"" + p_.labels[s.label] + "\");\n";
        break;
      case StmtKind::If:
        out_ += "if (";
        cond(s);
        out_ += ") {\n";
        stmts(s.body, depth + 1);
        indent(depth);
        if (!s.elseBody.empty()) {
          out_ += "} else {\n";
          stmts(s.elseBody, depth + 1);
          indent(depth);
        }
        out_ += "}\n";
        break;
      case StmtKind::While:
        out_ += "while (";
        cond(s);
        out_ += ") {\n";
        stmts(s.body, depth + 1);
        indent(depth);
        out_ += "}\n";
        break;
    }
  }

  void cond(const Stmt& s) {
    if (showToggles_ && s.guard >= 0 && toggleable_ && (*toggleable_)[s.guard]) {
      out_ += "tog(" + std::to_string(s.guard) + ") || ";
      expr(s.e1, precedence(ExprKind::Or) + 1);
      return;
    }
    expr(s.e1, 0);
  }

  void expr(std::int32_t ei, int minPrec) {
    const Expr& e = p_.exprs[ei];
    switch (e.kind) {
      case ExprKind::IntLit: out_ += std::to_string(e.value); return;
      case ExprKind::InputLen: out_ += "len(input)"; return;
      case ExprKind::TogRef: out_ += "tog(" + std::to_string(e.value) + ")"; return;
      case ExprKind::InputByte:
        out_ += "input[";
        expr(e.a, 0);
        out_ += "]";
        return;
      case ExprKind::VarRef: out_ += p_.symbols[e.sym]; return;
      case ExprKind::ArrRead:
        out_ += p_.symbols[e.sym] + "[";
        expr(e.a, 0);
        out_ += "]";
        return;
      case ExprKind::Not:
      case ExprKind::Neg: {
        bool paren = precedence(e.kind) < minPrec;
        if (paren) out_ += "(";
        out_ += e.kind == ExprKind::Not ? "!" : "-";
        expr(e.a, precedence(e.kind));
        if (paren) out_ += ")";
        return;
      }
      default: {
        int prec = precedence(e.kind);
        bool paren = prec < minPrec;
        if (paren) out_ += "(";
        expr(e.a, prec);
        out_ += opText(e.kind);
        expr(e.b, prec + 1);
        if (paren) out_ += ")";
        return;
      }
    }
  }

 public:
  bool showToggles_ = false;
  const std::vector<bool>* toggleable_ = nullptr;

 private:
  const Program& p_;
  std::string out_;
};

}  // namespace detail

inline std::string pretty_print(const Program& p) { return detail::Printer(p).run(); }

// Emits `tog(k) || cond` for every toggleable guard.
inline std::string pretty_print_instrumented(const Program& p,
                                             const std::vector<bool>& toggleable) {
  detail::Printer pr(p);
  pr.showToggles_ = true;
  pr.toggleable_ = &toggleable;
  return pr.run();
}

}  // namespace poco
