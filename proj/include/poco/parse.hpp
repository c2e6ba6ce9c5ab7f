#pragma once

#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "poco/ast.hpp"

namespace poco {

struct ParseResult {
  std::optional<Program> program;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return program.has_value(); }
};

namespace detail {

enum class Tok : std::uint8_t {
  End,
  Ident,
  Int,
  Char,
  String,
  KwFn,
  KwVar,
  KwArr,
  KwIf,
  KwElse,
  KwWhile,
  KwCrash,
  KwInput,
  KwLen,
  KwTog,
  LParen,
  RParen,
  LBrace,
  RBrace,
  LBracket,
  RBracket,
  Semi,
  Assign,
  OrOr,
  AndAnd,
  Bang,
  Eq,
  Ne,
  Lt,
  Le,
  Gt,
  Ge,
  Plus,
  Minus,
  Star,
  Slash,
  Percent,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::int64_t value = 0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skipWs();
    Token t;
    t.line = line_;
    t.col = col_;
    if (pos_ >= src_.size()) return t;
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string word;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        word.push_back(advance());
      }
      t.text = word;
      if (word == "fn") t.kind = Tok::KwFn;
      else if (word == "var") t.kind = Tok::KwVar;
      else if (word == "arr") t.kind = Tok::KwArr;
      else if (word == "if") t.kind = Tok::KwIf;
      else if (word == "else") t.kind = Tok::KwElse;
      else if (word == "while") t.kind = Tok::KwWhile;
      else if (word == "crash") t.kind = Tok::KwCrash;
      else if (word == "input") t.kind = Tok::KwInput;
      else if (word == "len") t.kind = Tok::KwLen;
      else if (word == "tog") t.kind = Tok::KwTog;
      else t.kind = Tok::Ident;
      return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::int64_t v = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        v = v * 10 + (advance() - '0');
      }
      t.kind = Tok::Int;
      t.value = v;
      return t;
    }
    if (c == '\'') {
      advance();
      if (pos_ >= src_.size()) return fail(t, "unterminated character literal");
      char v = advance();
      if (v == '\\') {
        if (pos_ >= src_.size()) return fail(t, "unterminated character literal");
        char e = advance();
        switch (e) {
          case 'n': v = '\n'; break;
          case 't': v = '\t'; break;
          case '0': v = '\0'; break;
          case '\\': v = '\\'; break;
          case '\'': v = '\''; break;
          default: return fail(t, "unknown escape in character literal");
        }
      }
      if (pos_ >= src_.size() || advance() != '\'') {
        return fail(t, "unterminated character literal");
      }
      t.kind = Tok::Char;
      t.value = static_cast<unsigned char>(v);
      return t;
    }
    if (c == '"') {
      advance();
      std::string s;
      while (pos_ < src_.size() && src_[pos_] != '"') s.push_back(advance());
      if (pos_ >= src_.size()) return fail(t, "unterminated string literal");
      advance();
      t.kind = Tok::String;
      t.text = s;
      return t;
    }
    auto two = [&](char a, char b, Tok k) {
      if (c == a && pos_ + 1 < src_.size() && src_[pos_ + 1] == b) {
        advance();
        advance();
        t.kind = k;
        return true;
      }
      return false;
    };
    if (two('|', '|', Tok::OrOr)) return t;
    if (two('&', '&', Tok::AndAnd)) return t;
    if (two('=', '=', Tok::Eq)) return t;
    if (two('!', '=', Tok::Ne)) return t;
    if (two('<', '=', Tok::Le)) return t;
    if (two('>', '=', Tok::Ge)) return t;
    advance();
    switch (c) {
      case '(': t.kind = Tok::LParen; break;
      case ')': t.kind = Tok::RParen; break;
      case '{': t.kind = Tok::LBrace; break;
      case '}': t.kind = Tok::RBrace; break;
      case '[': t.kind = Tok::LBracket; break;
      case ']': t.kind = Tok::RBracket; break;
      case ';': t.kind = Tok::Semi; break;
      case '=': t.kind = Tok::Assign; break;
      case '!': t.kind = Tok::Bang; break;
      case '<': t.kind = Tok::Lt; break;
      case '>': t.kind = Tok::Gt; break;
      case '+': t.kind = Tok::Plus; break;
      case '-': t.kind = Tok::Minus; break;
      case '*': t.kind = Tok::Star; break;
      case '/': t.kind = Tok::Slash; break;
      case '%': t.kind = Tok::Percent; break;
      default: return fail(t, std::string("unexpected character '") + c + "'");
    }
    return t;
  }

  const std::optional<Diagnostic>& error() const { return error_; }

 private:
  char advance() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skipWs() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  Token fail(Token t, std::string msg) {
    if (!error_) error_ = Diagnostic{t.line, t.col, std::move(msg)};
    t.kind = Tok::End;
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
  std::optional<Diagnostic> error_;
};

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { cur_ = lex_.next(); }

  ParseResult run() {
    while (cur_.kind != Tok::End && diags_.empty()) parseFunction();
    if (lex_.error()) diags_.push_back(*lex_.error());
    if (diags_.empty()) check();
    ParseResult r;
    r.diagnostics = diags_;
    if (diags_.empty()) r.program = std::move(prog_);
    return r;
  }

 private:
  void err(const Token& t, std::string msg) {
    if (diags_.empty()) diags_.push_back(Diagnostic{t.line, t.col, std::move(msg)});
  }

  Token eat() {
    Token t = cur_;
    cur_ = lex_.next();
    return t;
  }

  bool expect(Tok k, const char* what) {
    if (cur_.kind != k) {
      err(cur_, std::string("expected ") + what);
      return false;
    }
    eat();
    return true;
  }

  std::int32_t addExpr(Expr e) {
    prog_.exprs.push_back(e);
    return static_cast<std::int32_t>(prog_.exprs.size() - 1);
  }

  std::int32_t addStmt(Stmt s) {
    s.id = static_cast<StatementId>(prog_.stmts.size());
    prog_.stmts.push_back(std::move(s));
    return static_cast<std::int32_t>(prog_.stmts.size() - 1);
  }

  std::int32_t internSymbol(const std::string& name) {
    for (std::size_t i = 0; i < prog_.symbols.size(); ++i) {
      if (prog_.symbols[i] == name) return static_cast<std::int32_t>(i);
    }
    prog_.symbols.push_back(name);
    return static_cast<std::int32_t>(prog_.symbols.size() - 1);
  }

  void parseFunction() {
    if (!expect(Tok::KwFn, "'fn'")) return;
    if (cur_.kind != Tok::Ident) {
      err(cur_, "expected function name");
      return;
    }
    FunctionDef fn;
    fn.line = cur_.line;
    fn.col = cur_.col;
    fn.name = eat().text;
    if (!expect(Tok::LParen, "'('")) return;
    if (cur_.kind == Tok::KwInput) {
      eat();
      fn.hasInput = true;
    }
    if (!expect(Tok::RParen, "')'")) return;
    fn.body = parseBlock();
    prog_.functions.push_back(std::move(fn));
  }

  std::vector<std::int32_t> parseBlock() {
    std::vector<std::int32_t> out;
    if (!expect(Tok::LBrace, "'{'")) return out;
    while (cur_.kind != Tok::RBrace && cur_.kind != Tok::End && diags_.empty()) {
      auto s = parseStmt();
      if (s >= 0) out.push_back(s);
    }
    expect(Tok::RBrace, "'}'");
    return out;
  }

  std::int32_t parseStmt() {
    Token start = cur_;
    switch (cur_.kind) {
      case Tok::KwVar: {
        eat();
        if (cur_.kind != Tok::Ident) {
          err(cur_, "expected variable name");
          return -1;
        }
        Stmt s;
        s.kind = StmtKind::VarDecl;
        s.line = start.line;
        s.col = start.col;
        s.sym = internSymbol(eat().text);
        if (!expect(Tok::Assign, "'='")) return -1;
        s.e1 = parseExpr();
        expect(Tok::Semi, "';'");
        return addStmt(std::move(s));
      }
      case Tok::KwArr: {
        eat();
        if (cur_.kind != Tok::Ident) {
          err(cur_, "expected array name");
          return -1;
        }
        Stmt s;
        s.kind = StmtKind::ArrDecl;
        s.line = start.line;
        s.col = start.col;
        s.sym = internSymbol(eat().text);
        if (!expect(Tok::LBracket, "'['")) return -1;
        if (cur_.kind != Tok::Int) {
          err(cur_, "expected integer array size");
          return -1;
        }
        s.value = eat().value;
        if (!expect(Tok::RBracket, "']'")) return -1;
        expect(Tok::Semi, "';'");
        return addStmt(std::move(s));
      }
      case Tok::KwIf: {
        eat();
        Stmt s;
        s.kind = StmtKind::If;
        s.line = start.line;
        s.col = start.col;
        if (!expect(Tok::LParen, "'('")) return -1;
        s.e1 = parseExpr();
        if (!expect(Tok::RParen, "')'")) return -1;
        s.guard = newGuard(GuardKind::If, s.e1, start);
        s.body = parseBlock();
        if (cur_.kind == Tok::KwElse) {
          eat();
          s.elseBody = parseBlock();
        }
        std::int32_t idx = addStmt(std::move(s));
        prog_.guards[prog_.stmts[idx].guard].stmt = prog_.stmts[idx].id;
        return idx;
      }
      case Tok::KwWhile: {
        eat();
        Stmt s;
        s.kind = StmtKind::While;
        s.line = start.line;
        s.col = start.col;
        if (!expect(Tok::LParen, "'('")) return -1;
        s.e1 = parseExpr();
        if (!expect(Tok::RParen, "')'")) return -1;
        s.guard = newGuard(GuardKind::While, s.e1, start);
        s.body = parseBlock();
        std::int32_t idx = addStmt(std::move(s));
        prog_.guards[prog_.stmts[idx].guard].stmt = prog_.stmts[idx].id;
        return idx;
      }
      case Tok::KwCrash: {
        eat();
        Stmt s;
        s.kind = StmtKind::Crash;
        s.line = start.line;
        s.col = start.col;
        if (!expect(Tok::LParen, "'('")) return -1;
        if (cur_.kind != Tok::String) {
          err(cur_, "expected crash label string");
          return -1;
        }
        std::string label = eat().text;
        std::int32_t li = -1;
        for (std::size_t i = 0; i < prog_.labels.size(); ++i) {
          if (prog_.labels[i] == label) li = static_cast<std::int32_t>(i);
        }
        if (li < 0) {
          prog_.labels.push_back(label);
          li = static_cast<std::int32_t>(prog_.labels.size() - 1);
        }
        s.label = li;
        if (!expect(Tok::RParen, "')'")) return -1;
        expect(Tok::Semi, "';'");
        return addStmt(std::move(s));
      }
      case Tok::Ident: {
        Stmt s;
        s.line = start.line;
        s.col = start.col;
        s.sym = internSymbol(eat().text);
        if (cur_.kind == Tok::LBracket) {
          eat();
          s.kind = StmtKind::ArrStore;
          s.e1 = parseExpr();
          if (!expect(Tok::RBracket, "']'")) return -1;
          if (!expect(Tok::Assign, "'='")) return -1;
          s.e2 = parseExpr();
        } else {
          s.kind = StmtKind::Assign;
          if (!expect(Tok::Assign, "'='")) return -1;
          s.e1 = parseExpr();
        }
        expect(Tok::Semi, "';'");
        return addStmt(std::move(s));
      }
      default:
        err(cur_, "expected statement");
        eat();
        return -1;
    }
  }

  GuardId newGuard(GuardKind kind, std::int32_t cond, const Token& at) {
    GuardSite g;
    g.id = static_cast<GuardId>(prog_.guards.size());
    g.kind = kind;
    g.condExpr = cond;
    g.line = at.line;
    g.col = at.col;
    prog_.guards.push_back(g);
    return g.id;
  }

  std::int32_t parseExpr() { return parseOr(); }

  std::int32_t parseOr() {
    std::int32_t lhs = parseAnd();
    while (cur_.kind == Tok::OrOr) {
      Token op = eat();
      std::int32_t rhs = parseAnd();
      lhs = addExpr({ExprKind::Or, lhs, rhs, 0, -1, op.line, op.col});
    }
    return lhs;
  }

  std::int32_t parseAnd() {
    std::int32_t lhs = parseCmp();
    while (cur_.kind == Tok::AndAnd) {
      Token op = eat();
      std::int32_t rhs = parseCmp();
      lhs = addExpr({ExprKind::And, lhs, rhs, 0, -1, op.line, op.col});
    }
    return lhs;
  }

  std::int32_t parseCmp() {
    std::int32_t lhs = parseAdd();
    ExprKind k;
    switch (cur_.kind) {
      case Tok::Eq: k = ExprKind::Eq; break;
      case Tok::Ne: k = ExprKind::Ne; break;
      case Tok::Lt: k = ExprKind::Lt; break;
      case Tok::Le: k = ExprKind::Le; break;
      case Tok::Gt: k = ExprKind::Gt; break;
      case Tok::Ge: k = ExprKind::Ge; break;
      default: return lhs;
    }
    Token op = eat();
    std::int32_t rhs = parseAdd();
    return addExpr({k, lhs, rhs, 0, -1, op.line, op.col});
  }

  std::int32_t parseAdd() {
    std::int32_t lhs = parseMul();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      Token op = eat();
      std::int32_t rhs = parseMul();
      lhs = addExpr({op.kind == Tok::Plus ? ExprKind::Add : ExprKind::Sub, lhs, rhs, 0, -1,
                     op.line, op.col});
    }
    return lhs;
  }

  std::int32_t parseMul() {
    std::int32_t lhs = parseUnary();
    while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash || cur_.kind == Tok::Percent) {
      Token op = eat();
      std::int32_t rhs = parseUnary();
      ExprKind k = op.kind == Tok::Star ? ExprKind::Mul
                   : op.kind == Tok::Slash ? ExprKind::Div
                                           : ExprKind::Mod;
      lhs = addExpr({k, lhs, rhs, 0, -1, op.line, op.col});
    }
    return lhs;
  }

  std::int32_t parseUnary() {
    if (cur_.kind == Tok::Bang) {
      Token op = eat();
      return addExpr({ExprKind::Not, parseUnary(), -1, 0, -1, op.line, op.col});
    }
    if (cur_.kind == Tok::Minus) {
      Token op = eat();
      return addExpr({ExprKind::Neg, parseUnary(), -1, 0, -1, op.line, op.col});
    }
    return parsePrimary();
  }

  std::int32_t parsePrimary() {
    Token t = cur_;
    switch (t.kind) {
      case Tok::Int:
      case Tok::Char:
        eat();
        return addExpr({ExprKind::IntLit, -1, -1, t.value, -1, t.line, t.col});
      case Tok::KwLen: {
        eat();
        if (!expect(Tok::LParen, "'('")) return badExpr(t);
        if (!expect(Tok::KwInput, "'input'")) return badExpr(t);
        if (!expect(Tok::RParen, "')'")) return badExpr(t);
        return addExpr({ExprKind::InputLen, -1, -1, 0, -1, t.line, t.col});
      }
      case Tok::KwTog: {
        eat();
        if (!expect(Tok::LParen, "'('")) return badExpr(t);
        if (cur_.kind != Tok::Int) {
          err(cur_, "expected toggle index");
          return badExpr(t);
        }
        std::int64_t v = eat().value;
        if (!expect(Tok::RParen, "')'")) return badExpr(t);
        return addExpr({ExprKind::TogRef, -1, -1, v, -1, t.line, t.col});
      }
      case Tok::KwInput: {
        eat();
        if (!expect(Tok::LBracket, "'['")) return badExpr(t);
        std::int32_t idx = parseExpr();
        if (!expect(Tok::RBracket, "']'")) return badExpr(t);
        return addExpr({ExprKind::InputByte, idx, -1, 0, -1, t.line, t.col});
      }
      case Tok::Ident: {
        eat();
        std::int32_t sym = internSymbol(t.text);
        if (cur_.kind == Tok::LBracket) {
          eat();
          std::int32_t idx = parseExpr();
          if (!expect(Tok::RBracket, "']'")) return badExpr(t);
          return addExpr({ExprKind::ArrRead, idx, -1, 0, sym, t.line, t.col});
        }
        return addExpr({ExprKind::VarRef, -1, -1, 0, sym, t.line, t.col});
      }
      case Tok::LParen: {
        eat();
        std::int32_t e = parseExpr();
        expect(Tok::RParen, "')'");
        return e;
      }
      default:
        err(t, "expected expression");
        eat();
        return badExpr(t);
    }
  }

  std::int32_t badExpr(const Token& t) {
    return addExpr({ExprKind::IntLit, -1, -1, 0, -1, t.line, t.col});
  }

  // Semantic checks: entry uniqueness, declaration-before-use, scalar/array use.
  void check() {
    std::int32_t entry = -1;
    for (std::size_t i = 0; i < prog_.functions.size(); ++i) {
      for (std::size_t j = 0; j < i; ++j) {
        if (prog_.functions[i].name == prog_.functions[j].name) {
          err(Token{Tok::Ident, "", 0, prog_.functions[i].line, prog_.functions[i].col},
              "duplicate function '" + prog_.functions[i].name + "'");
          return;
        }
      }
      if (prog_.functions[i].hasInput) {
        if (entry >= 0) {
          err(Token{Tok::Ident, "", 0, prog_.functions[i].line, prog_.functions[i].col},
              "multiple entry functions take 'input'");
          return;
        }
        entry = static_cast<std::int32_t>(i);
      }
    }
    if (entry < 0) {
      err(Token{}, "missing entry function");
      return;
    }
    prog_.entry = entry;
    for (auto& fn : prog_.functions) checkFunction(fn);
  }

  void checkFunction(FunctionDef& fn) {
    // slot per symbol: >=0 scalar slot, arrays tracked separately
    std::map<std::int32_t, std::pair<bool, std::int32_t>> decls;  // sym -> (isArray, slot)
    std::int32_t scalars = 0, arrays = 0;
    checkStmts(fn.body, decls, scalars, arrays);
    fn.scalarSlots = scalars;
    fn.arraySlots = arrays;
  }

  void checkStmts(const std::vector<std::int32_t>& body,
                  std::map<std::int32_t, std::pair<bool, std::int32_t>>& decls,
                  std::int32_t& scalars, std::int32_t& arrays) {
    for (auto si : body) {
      if (!diags_.empty()) return;
      Stmt& s = prog_.stmts[si];
      switch (s.kind) {
        case StmtKind::VarDecl:
          checkExpr(s.e1, decls);
          if (decls.count(s.sym)) {
            err(Token{Tok::Ident, "", 0, s.line, s.col},
                "redeclaration of '" + prog_.symbols[s.sym] + "'");
            return;
          }
          decls[s.sym] = {false, scalars};
          s.value = scalars++;  // runtime slot
          break;
        case StmtKind::ArrDecl:
          if (decls.count(s.sym)) {
            err(Token{Tok::Ident, "", 0, s.line, s.col},
                "redeclaration of '" + prog_.symbols[s.sym] + "'");
            return;
          }
          if (s.value <= 0) {
            err(Token{Tok::Ident, "", 0, s.line, s.col}, "array size must be positive");
            return;
          }
          decls[s.sym] = {true, arrays};
          s.e2 = arrays++;  // runtime array slot
          break;
        case StmtKind::Assign: {
          checkExpr(s.e1, decls);
          auto it = decls.find(s.sym);
          if (it == decls.end()) {
            err(Token{Tok::Ident, "", 0, s.line, s.col},
                "assignment to undeclared variable '" + prog_.symbols[s.sym] + "'");
            return;
          }
          if (it->second.first) {
            err(Token{Tok::Ident, "", 0, s.line, s.col},
                "type error: array '" + prog_.symbols[s.sym] + "' used as scalar");
            return;
          }
          s.value = it->second.second;
          break;
        }
        case StmtKind::ArrStore: {
          checkExpr(s.e1, decls);
          checkExpr(s.e2, decls);
          auto it = decls.find(s.sym);
          if (it == decls.end() || !it->second.first) {
            err(Token{Tok::Ident, "", 0, s.line, s.col},
                "store into undeclared array '" + prog_.symbols[s.sym] + "'");
            return;
          }
          s.value = it->second.second;
          break;
        }
        case StmtKind::If:
          checkExpr(s.e1, decls);
          checkStmts(s.body, decls, scalars, arrays);
          checkStmts(s.elseBody, decls, scalars, arrays);
          break;
        case StmtKind::While:
          checkExpr(s.e1, decls);
          checkStmts(s.body, decls, scalars, arrays);
          break;
        case StmtKind::Crash:
          break;
      }
    }
  }

  void checkExpr(std::int32_t ei,
                 std::map<std::int32_t, std::pair<bool, std::int32_t>>& decls) {
    if (ei < 0 || !diags_.empty()) return;
    Expr& e = prog_.exprs[ei];
    switch (e.kind) {
      case ExprKind::VarRef: {
        auto it = decls.find(e.sym);
        if (it == decls.end()) {
          err(Token{Tok::Ident, "", 0, e.line, e.col},
              "use of undeclared variable '" + prog_.symbols[e.sym] + "'");
          return;
        }
        if (it->second.first) {
          err(Token{Tok::Ident, "", 0, e.line, e.col},
              "type error: array '" + prog_.symbols[e.sym] + "' used as scalar");
          return;
        }
        e.value = it->second.second;
        break;
      }
      case ExprKind::ArrRead: {
        checkExpr(e.a, decls);
        auto it = decls.find(e.sym);
        if (it == decls.end() || !it->second.first) {
          err(Token{Tok::Ident, "", 0, e.line, e.col},
              "read from undeclared array '" + prog_.symbols[e.sym] + "'");
          return;
        }
        // stash array slot alongside; value unused for ArrRead otherwise
        e.value = it->second.second;
        break;
      }
      default:
        checkExpr(e.a, decls);
        checkExpr(e.b, decls);
        break;
    }
  }

  Lexer lex_;
  Token cur_;
  Program prog_;
  std::vector<Diagnostic> diags_;
};

}  // namespace detail

inline ParseResult parse(std::string_view source) { return detail::Parser(source).run(); }

}  // namespace poco
