#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "poco/poco.hpp"
#include "support/gen.hpp"
#include "support/targets.hpp"

using namespace poco;

namespace {

Program must_parse(const std::string& src) {
  auto pr = parse(src);
  REQUIRE_MESSAGE(pr.ok(), (pr.ok() ? "" : pr.diagnostics.front().message));
  return std::move(*pr.program);
}

// Independent guard census: token-level scan for `if` / `while` keywords.
std::size_t token_guard_count(const std::string& src) {
  std::size_t n = 0;
  bool inComment = false, inStr = false, inChar = false;
  for (std::size_t i = 0; i < src.size(); ++i) {
    char c = src[i];
    if (inComment) {
      if (c == '\n') inComment = false;
      continue;
    }
    if (inStr) {
      if (c == '"') inStr = false;
      continue;
    }
    if (inChar) {
      if (c == '\'') inChar = false;
      if (c == '\\') ++i;
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      inComment = true;
      continue;
    }
    if (c == '"') { inStr = true; continue; }
    if (c == '\'') { inChar = true; continue; }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_')) {
        ++j;
      }
      std::string word = src.substr(i, j - i);
      if (word == "if" || word == "while") ++n;
      i = j - 1;
    }
  }
  return n;
}

}  // namespace

TEST_CASE("foo target parses with five lexically ordered guard sites") {
  std::string src = sample::slurp("targets/foo.gl");
  Program p = must_parse(src);
  REQUIRE(p.guards.size() == 5);
  for (GuardId g = 0; g < 5; ++g) {
    CHECK(p.guards[static_cast<std::size_t>(g)].id == g);
    CHECK(p.guards[static_cast<std::size_t>(g)].kind == GuardKind::If);
    if (g > 0) {
      CHECK(p.guards[static_cast<std::size_t>(g)].line >
            p.guards[static_cast<std::size_t>(g) - 1].line);
    }
  }
  CHECK(p.labels == std::vector<std::string>{"hello-bug"});
}

TEST_CASE("empty source reports a missing entry function") {
  auto pr = parse("");
  REQUIRE_FALSE(pr.ok());
  CHECK(pr.diagnostics.front().message == "missing entry function");
}

TEST_CASE("parse errors carry line and column") {
  auto pr = parse("fn main(input) {\n  if (x > {\n}\n");
  REQUIRE_FALSE(pr.ok());
  CHECK(pr.diagnostics.front().line >= 2);
  CHECK(pr.diagnostics.front().col >= 1);
}

TEST_CASE("duplicate function and missing entry are diagnosed") {
  auto dup = parse("fn a(input) { var x = 1; }\nfn a(input) { var y = 2; }\n");
  REQUIRE_FALSE(dup.ok());
  bool sawDup = false;
  for (const auto& d : dup.diagnostics) {
    if (d.message.find("duplicate function") != std::string::npos) sawDup = true;
  }
  CHECK(sawDup);

  auto noEntry = parse("fn a() { var x = 1; }\n");
  REQUIRE_FALSE(noEntry.ok());
}

TEST_CASE("type errors: scalar/array misuse is rejected") {
  CHECK_FALSE(parse("fn m(input) { var x = 1; x[0] = 2; }").ok());
  CHECK_FALSE(parse("fn m(input) { arr a[4]; var y = a + 1; }").ok());
  CHECK_FALSE(parse("fn m(input) { var y = z + 1; }").ok());  // use before declaration
}

TEST_CASE("straight-line function yields a single block with no edges") {
  Program p = must_parse("fn m(input) { var a = 1; var b = 2; a = a + b; }");
  Cfg cfg = build_entry_cfg(p);
  CHECK(cfg.blocks.size() == 1);
  CHECK(cfg.edges.empty());
  CHECK(cfg.entry == cfg.exit);
  CHECK(cfg.blocks[0].stmts.size() == 3);
}

TEST_CASE("single if/else yields the 4-block 4-edge diamond") {
  Program p = must_parse(
      "fn m(input) { if (input[0] > 1) { var a = 1; } else { var b = 2; } }");
  Cfg cfg = build_entry_cfg(p);
  CHECK(cfg.blocks.size() == 4);
  CHECK(cfg.edges.size() == 4);
  const BranchTargets& t = cfg.targets[static_cast<std::size_t>(p.guards[0].stmt)];
  std::set<std::pair<BlockId, BlockId>> expect = {{t.header, t.trueBlock},
                                                  {t.header, t.falseBlock},
                                                  {t.trueBlock, t.join},
                                                  {t.falseBlock, t.join}};
  CHECK(cfg.edges == expect);
}

TEST_CASE("three-level nested if matches the hand-counted census") {
  Program p = must_parse(
      "fn m(input) {\n"
      "  var x = input[0];\n"
      "  if (x > 0) { if (x > 1) { if (x > 2) { x = 3; } } }\n"
      "}\n");
  Cfg cfg = build_entry_cfg(p);
  // Hand count: entry block plus (then + join) per level = 7 blocks; each level
  // contributes header->then, header->join, thenEnd->join = 9 edges.
  CHECK(cfg.blocks.size() == 7);
  CHECK(cfg.edges.size() == 9);
}

TEST_CASE("two sequential guards build the expected five-block shape") {
  Program p = must_parse(
      "fn m(input) {\n"
      "  if (input[0] > 1) { var a = 1; }\n"
      "  if (input[1] > 2) { var b = 2; }\n"
      "}\n");
  Cfg cfg = build_entry_cfg(p);
  CHECK(cfg.blocks.size() == 5);
  CHECK(cfg.edges.size() == 6);
  // The second header is the first guard's join: sequential, not nested.
  CHECK(cfg.targets[static_cast<std::size_t>(p.guards[1].stmt)].header ==
        cfg.targets[static_cast<std::size_t>(p.guards[0].stmt)].join);
}

TEST_CASE("while loop header owns the guard and a back edge") {
  Program p = must_parse(
      "fn m(input) { var i = 0; while (i < 3) { i = i + 1; } var z = 1; }");
  Cfg cfg = build_entry_cfg(p);
  const BranchTargets& t = cfg.targets[static_cast<std::size_t>(p.guards[0].stmt)];
  CHECK(t.join == t.header);
  CHECK(cfg.edges.count({t.header, t.trueBlock}) == 1);
  CHECK(cfg.edges.count({t.header, t.falseBlock}) == 1);
  bool backEdge = false;
  for (const auto& e : cfg.edges) {
    if (e.second == t.header && e.first != t.header && e.first != cfg.entry) backEdge = true;
  }
  CHECK(backEdge);
}

TEST_CASE("crash statements share a sink per label and edge to exit") {
  Program p = must_parse(
      "fn m(input) {\n"
      "  if (input[0] > 1) { crash(\"one\"); }\n"
      "  if (input[1] > 1) { crash(\"one\"); } else { crash(\"two\"); }\n"
      "}\n");
  Cfg cfg = build_entry_cfg(p);
  REQUIRE(p.labels.size() == 2);
  BlockId sinkOne = cfg.crashSinkForLabel[0];
  BlockId sinkTwo = cfg.crashSinkForLabel[1];
  CHECK(sinkOne >= 0);
  CHECK(sinkTwo >= 0);
  CHECK(sinkOne != sinkTwo);
  CHECK(cfg.edges.count({sinkOne, cfg.exit}) == 1);
  CHECK(cfg.edges.count({sinkTwo, cfg.exit}) == 1);
}

TEST_CASE("guard census equals the independent token scan on random programs") {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 200; ++i) {
    gen::Options opt;
    opt.whiles = (i % 2 == 0);
    std::string src = gen::random_program(rng, opt);
    Program p = must_parse(src);
    CHECK(p.guards.size() == token_guard_count(src));
  }
}

TEST_CASE("parsing is deterministic and pretty-print round-trips") {
  std::mt19937_64 rng(202);
  for (int i = 0; i < 100; ++i) {
    std::string src = gen::random_program(rng);
    Program p1 = must_parse(src);
    Program p2 = must_parse(src);
    std::string printed1 = pretty_print(p1);
    CHECK(printed1 == pretty_print(p2));
    Program p3 = must_parse(printed1);
    CHECK(pretty_print(p3) == printed1);
    CHECK(p3.guards.size() == p1.guards.size());
    CHECK(p3.stmts.size() == p1.stmts.size());
  }
}

TEST_CASE("cfg construction is deterministic") {
  std::mt19937_64 rng(303);
  std::string src = gen::random_program(rng);
  Program p = must_parse(src);
  Cfg a = build_entry_cfg(p);
  Cfg b = build_entry_cfg(p);
  CHECK(a.edges == b.edges);
  CHECK(a.blocks.size() == b.blocks.size());
  for (const auto& blk : a.blocks) {
    if (blk.id != a.exit) {
      bool hasOut = false;
      for (const auto& e : a.edges) hasOut |= (e.first == blk.id);
      // unreachable continuation blocks after crash are the only sinks allowed
      // besides exit; they carry no statements
      if (!hasOut) CHECK(blk.stmts.empty());
    }
  }
}
