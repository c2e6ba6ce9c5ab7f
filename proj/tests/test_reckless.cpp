#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "poco/poco.hpp"
#include "support/oracles.hpp"
#include "support/targets.hpp"

using namespace poco;

namespace {

// n top-level guards, each unreachable without its toggle; guards listed in
// `faulting` divide by zero when their branch is entered. Faults are fully
// independent across guards.
Target independent_target(int n, const std::set<int>& faulting) {
  std::string src = "fn t(input) {\n";
  for (int i = 0; i < n; ++i) {
    src += "  var d" + std::to_string(i) + " = " + (faulting.count(i) ? "0" : "1") + ";\n";
  }
  for (int i = 0; i < n; ++i) {
    src += "  if (input[0] == 255) { var x" + std::to_string(i) + " = 1 / d" +
           std::to_string(i) + "; }\n";
  }
  src += "}\n";
  auto pr = parse(src);
  REQUIRE(pr.ok());
  return Target::from(std::move(*pr.program));
}

std::int64_t probe_bound(std::size_t n, std::size_t k) {
  std::int64_t lg = 0;
  while ((std::size_t{1} << lg) < n) ++lg;
  return 4 * static_cast<std::int64_t>(k) * lg + lg + 2;
}

}  // namespace

TEST_CASE("synergy pair blames the later-disabled guard") {
  Target t = sample::load_target("targets/boo.gl");
  Corpus c = {Seed{"s", std::string("\x04\x08", 2)}};
  auto res = collect_crashing_reckless(t, c, {0, 1});
  CHECK(res.preconditionHeld);
  CHECK(res.reckless == std::set<GuardId>{1});
}

TEST_CASE("precondition violation yields an empty result with a flag") {
  Target t = sample::load_target("targets/boo.gl");
  Corpus c = {Seed{"s", std::string("\x04\x08", 2)}};
  auto res = collect_crashing_reckless(t, c, {0});  // g0 alone is harmless
  CHECK_FALSE(res.preconditionHeld);
  CHECK(res.reckless.empty());
  CHECK(res.probes == 1);
}

TEST_CASE("single reckless guard as the sole disabled entry") {
  Target t = independent_target(1, {0});
  Corpus c = {Seed{"s", "a"}};
  auto res = collect_crashing_reckless(t, c, {0});
  CHECK(res.reckless == std::set<GuardId>{0});
  CHECK(res.probes <= probe_bound(1, 1));
}

TEST_CASE("probe count for reckless-free lists scales as the doubling walk") {
  Target t = independent_target(8, {});
  Corpus crash = {Seed{"s", "a"}};
  // No configuration crashes, so the precondition probe fails fast: 1 probe.
  auto res = collect_crashing_reckless(t, crash, {0, 1, 2, 3, 4, 5, 6, 7});
  CHECK_FALSE(res.preconditionHeld);
  CHECK(res.probes == 1);
}

TEST_CASE("oracle equivalence on independent faults up to 12 guards") {
  std::mt19937_64 rng(111);
  for (int iter = 0; iter < 60; ++iter) {
    int n = 1 + static_cast<int>(rng() % 12);
    std::set<int> faulting;
    for (int i = 0; i < n; ++i) {
      if (rng() % 3 == 0) faulting.insert(i);
    }
    if (faulting.empty()) faulting.insert(static_cast<int>(rng() % n));
    Target t = independent_target(n, faulting);
    Corpus c = {Seed{"s", "a"}};
    std::vector<GuardId> gMinus;
    for (int i = 0; i < n; ++i) gMinus.push_back(i);
    auto res = collect_crashing_reckless(t, c, gMinus);
    REQUIRE(res.preconditionHeld);
    auto want = oracle::singleton_reckless(t, gMinus, c,
                                           kDefaultStepBudget * kProbeBudgetFactor);
    CHECK(res.reckless == want);
    CHECK(res.probes <= probe_bound(static_cast<std::size_t>(n), want.size()));
  }
}

TEST_CASE("probes run under the extended budget") {
  // The loop needs more than the normal budget but fits in the 10x probe
  // budget, so the probe classifies it as harmless rather than a timeout.
  auto pr = parse(
      "fn m(input) {\n"
      "  if (input[0] == 255) {\n"
      "    var i = 0;\n"
      "    while (i < 60000) { i = i + 1; }\n"
      "  }\n"
      "  var z = 0;\n"
      "  if (input[1] == 255) { var y = 1 / z; }\n"
      "}\n");
  REQUIRE(pr.ok());
  Target t = Target::from(std::move(*pr.program));
  Corpus c = {Seed{"s", "aa"}};
  // The while loop owns guard id 1 (not toggleable); the faulting if is g2.
  // Normal budget would flag the loop-opening guard; the probe budget
  // exonerates it.
  CHECK(execute(t, toggles_for(t.ip, {0}), c[0], 100000).verdict.kind ==
        VerdictKind::Timeout);
  auto res = collect_crashing_reckless(t, c, {0, 2}, 100000);
  CHECK(res.preconditionHeld);
  CHECK(res.reckless == std::set<GuardId>{2});
}

TEST_CASE("converging: entry guard forced open is flagged by the executed path") {
  Target t = sample::load_target("targets/argcheck.gl");
  Corpus sNew = {Seed{"s", "zz"}};
  CHECK(collect_converging_reckless(t, sNew, {0}) == std::set<GuardId>{0});
}

TEST_CASE("converging: empty disabled set yields the empty set") {
  Target t = sample::load_target("targets/argcheck.gl");
  Corpus sNew = {Seed{"s", "zz"}};
  CHECK(collect_converging_reckless(t, sNew, {}).empty());
}

TEST_CASE("converging: disabled guard shielded by an enabled sibling is excluded") {
  auto pr = parse(
      "fn m(input) {\n"
      "  if (input[0] == 'q') {\n"
      "    if (input[1] == 'r') { var a = 1; }\n"
      "  }\n"
      "}\n");
  REQUIRE(pr.ok());
  Target t = Target::from(std::move(*pr.program));
  Corpus sNew = {Seed{"s", "zz"}};
  // g1 is disabled but sits behind enabled g0, which "zz" never passes.
  CHECK(collect_converging_reckless(t, sNew, {1}).empty());
  // Every returned guard must be disabled and on an executed path.
  auto both = collect_converging_reckless(t, sNew, {0, 1});
  CHECK(both == std::set<GuardId>{0, 1});  // forcing g0 open exposes g1 too
}
