#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "poco/poco.hpp"
#include "support/targets.hpp"

using namespace poco;

TEST_CASE("fuzzing is deterministic in the rng seed") {
  Target t = sample::load_target("targets/foo.gl");
  Corpus seeds = {Seed{"s", "jello"}};
  FuzzReport a = fuzz(t, seeds, 2000, 7);
  FuzzReport b = fuzz(t, seeds, 2000, 7);
  CHECK(a.executions == b.executions);
  CHECK(a.queue == b.queue);
  CHECK(a.finalEdges == b.finalEdges);
  CHECK(a.edgeTimeline == b.edgeTimeline);
  REQUIRE(a.crashes.size() == b.crashes.size());
  for (std::size_t i = 0; i < a.crashes.size(); ++i) {
    CHECK(a.crashes[i].label == b.crashes[i].label);
    CHECK(a.crashes[i].execIndex == b.crashes[i].execIndex);
    CHECK(a.crashes[i].input == b.crashes[i].input);
  }
  FuzzReport c = fuzz(t, seeds, 2000, 8);
  CHECK((c.executions == a.executions));  // budget-driven either way
}

TEST_CASE("a seed that already triggers the bug is recorded at execution 0") {
  Target t = sample::load_target("targets/foo.gl");
  FuzzReport r = fuzz(t, {Seed{"s", "hello"}}, 100, 1);
  REQUIRE_FALSE(r.crashes.empty());
  CHECK(r.crashes[0].label == "hello-bug");
  CHECK(r.crashes[0].execIndex == 0);
  CHECK(r.crashes[0].input == "hello");
}

TEST_CASE("guard-free target never grows the queue") {
  auto pr = parse("fn m(input) { var a = input[0]; a = a + 1; }");
  REQUIRE(pr.ok());
  Target t = Target::from(std::move(*pr.program));
  FuzzReport r = fuzz(t, {Seed{"s", "x"}}, 1000, 3);
  CHECK(r.queue.size() == 1);
  CHECK(r.executions == 1000);
}

TEST_CASE("jello finds the bug within a modest budget") {
  Target t = sample::load_target("targets/foo.gl");
  FuzzReport r = fuzz(t, {Seed{"s", "jello"}}, 200000, 42);
  auto execs = r.execsToBug("hello-bug");
  REQUIRE(execs.has_value());
  CHECK(*execs < 200000);
}

TEST_CASE("edge timeline is non-decreasing and ends at the final count") {
  Target t = sample::load_target("targets/argcheck.gl");
  FuzzReport r = fuzz(t, {Seed{"s", "<b"}}, 20000, 5);
  std::int64_t prev = 0;
  for (const auto& [idx, count] : r.edgeTimeline) {
    CHECK(count > prev);
    prev = count;
  }
  CHECK(prev == static_cast<std::int64_t>(r.finalEdges.size()));
}

TEST_CASE("every recorded crash replays to its label") {
  Target t = sample::load_target("targets/argcheck.gl");
  FuzzReport r = fuzz(t, {Seed{"s", "<b"}}, 50000, 11);
  REQUIRE_FALSE(r.crashes.empty());
  for (const auto& c : r.crashes) {
    ExecOutcome out = execute_base(t, Seed{"replay", c.input});
    CHECK(out.verdict.kind == VerdictKind::Bug);
    CHECK(out.verdict.detail == c.label);
  }
}

TEST_CASE("queued offspring each contributed a new edge at admission") {
  Target t = sample::load_target("targets/foo.gl");
  Corpus seeds = {Seed{"s", "jello"}};
  FuzzReport r = fuzz(t, seeds, 50000, 13);
  // Replaying the queue in admission order must strictly grow coverage at
  // every step (initial seeds first, then admitted offspring).
  EdgeSet cumulative;
  std::size_t initial = seeds.size();
  for (std::size_t i = 0; i < r.queue.size(); ++i) {
    ExecOutcome out = execute_base(t, Seed{"q", r.queue[i]});
    std::size_t before = cumulative.size();
    cumulative.insert(out.edges.begin(), out.edges.end());
    if (i >= initial) CHECK(cumulative.size() > before);
  }
  CHECK(cumulative == r.finalEdges);
}

TEST_CASE("empty initial seeds are rejected") {
  Target t = sample::load_target("targets/foo.gl");
  CHECK_THROWS(fuzz(t, {}, 100, 0));
}

TEST_CASE("seed improvement holds for the suppressed seed") {
  Target t = sample::load_target("targets/foo.gl");
  std::vector<std::uint64_t> rngSeeds;
  for (std::uint64_t i = 0; i < 10; ++i) rngSeeds.push_back(i);
  SeedImprovementReport rep =
      seed_improvement(t, {Seed{"base", ""}}, Seed{"cand", "jello"}, 20000, rngSeeds);
  CHECK(rep.holds);
  CHECK(rep.trialsWithGain == 10);
  // The gain includes the crash finding and fresh true-branch edges.
  bool sawBug = false, sawEdge = false;
  for (const auto& tr : rep.trials) {
    for (const auto& f : tr.deltaFindings) {
      if (f.rfind("bug:hello-bug", 0) == 0) sawBug = true;
      if (f.rfind("edge:", 0) == 0) sawEdge = true;
    }
  }
  CHECK(sawBug);
  CHECK(sawEdge);
}

TEST_CASE("a byte-identical candidate adds nothing") {
  Target t = sample::load_target("targets/foo.gl");
  std::vector<std::uint64_t> rngSeeds = {1, 2, 3, 4, 5};
  SeedImprovementReport rep =
      seed_improvement(t, {Seed{"base", "jello"}}, Seed{"cand", "jello"}, 5000, rngSeeds);
  CHECK_FALSE(rep.holds);
  CHECK(rep.trialsWithGain == 0);
}

TEST_CASE("a subset-coverage candidate adds nothing on a bug-free target") {
  auto pr = parse(
      "fn m(input) {\n"
      "  if (input[0] == 'x') {\n"
      "    if (input[1] == 'y') { var a = 1; }\n"
      "  }\n"
      "}\n");
  REQUIRE(pr.ok());
  Target t = Target::from(std::move(*pr.program));
  // "xy" covers everything "x" covers and more, so adding "x" gains nothing.
  std::vector<std::uint64_t> rngSeeds;
  for (std::uint64_t i = 0; i < 30; ++i) rngSeeds.push_back(100 + i);
  SeedImprovementReport rep =
      seed_improvement(t, {Seed{"base", "xy"}}, Seed{"cand", "x"}, 300, rngSeeds);
  CHECK_FALSE(rep.holds);
}

TEST_CASE("fresh seed ratio: identical selections every round give 1/n") {
  std::vector<std::vector<std::string>> rounds(4, {"a", "b"});
  auto ratios = fresh_seed_ratio(rounds);
  REQUIRE(ratios.size() == 4);
  for (std::size_t n = 1; n <= 4; ++n) {
    REQUIRE(ratios[n - 1].has_value());
    CHECK(*ratios[n - 1] == doctest::Approx(1.0 / static_cast<double>(n)));
  }
  // Empty rounds are reported as absent.
  auto none = fresh_seed_ratio({{}, {}});
  CHECK_FALSE(none[0].has_value());
  CHECK_FALSE(none[1].has_value());
}

TEST_CASE("a12: identical samples tie at one half, antisymmetry holds") {
  std::vector<double> same = {1, 2, 3};
  CHECK(a12(same, same) == doctest::Approx(0.5));
  std::vector<double> lo = {1, 2, 3, 4};
  std::vector<double> hi = {3, 4, 5};
  CHECK(a12(hi, lo) + a12(lo, hi) == doctest::Approx(1.0));
  CHECK(a12(hi, lo) > 0.5);
  CHECK(a12({5, 6}, {1, 2}) == doctest::Approx(1.0));
  CHECK_THROWS(a12({}, {1.0}));
}

TEST_CASE("bug stats: gamma and median follow the discovery table") {
  Target t = sample::load_target("targets/foo.gl");
  std::vector<FuzzReport> reports(10);
  // Synthesize 9 discoveries out of 10 repeats with known execution indices.
  for (int i = 0; i < 9; ++i) {
    reports[static_cast<std::size_t>(i)].crashes.push_back(
        {"hello-bug", 100 + 10 * i, "hello"});
  }
  auto stats = bug_stats(reports);
  REQUIRE(stats.size() == 1);
  CHECK(stats[0].label == "hello-bug");
  CHECK(stats[0].gamma == doctest::Approx(0.9));
  REQUIRE(stats[0].medianExecsToBug.has_value());
  CHECK(*stats[0].medianExecsToBug == doctest::Approx(140.0));  // middle of 100..180
}
