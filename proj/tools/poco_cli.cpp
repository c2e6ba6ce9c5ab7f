// poco: guarded-program seed-selection laboratory command line.
//
// Subcommands: parse, instrument, run, cmin, poco, fuzz, eval, report.
// Exit codes: 0 ok, 1 usage, 2 input error, 3 precondition violated.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "poco/poco.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitPrecondition = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const fs::path& p) {
  try {
    return poco::read_file(p);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

poco::Target load_target(const fs::path& programPath, bool toggleLoops) {
  auto pr = poco::parse(slurp(programPath));
  if (!pr.ok()) {
    std::string msg;
    for (const auto& d : pr.diagnostics) {
      msg += poco::format_diagnostic(programPath.string(), d) + "\n";
    }
    throw InputError("parse failed:\n" + msg);
  }
  return poco::Target::from(std::move(*pr.program), toggleLoops);
}

poco::Corpus load_corpus(const fs::path& dir) {
  try {
    return poco::ingest_corpus(dir);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

poco::ToggleVector load_toggles(const poco::Target& t, const std::string& path) {
  if (path.empty()) return poco::ToggleVector::allOff(t.guardCount());
  ordered_json j;
  try {
    j = ordered_json::parse(slurp(path));
  } catch (const std::exception& e) {
    throw InputError(std::string("bad toggle file: ") + e.what());
  }
  if (!j.contains("disabled") || !j["disabled"].is_array()) {
    throw InputError("toggle file needs a \"disabled\" array of guard ids");
  }
  std::set<poco::GuardId> disabled;
  for (const auto& v : j["disabled"]) {
    auto g = v.get<poco::GuardId>();
    if (g < 0 || g >= static_cast<poco::GuardId>(t.guardCount())) {
      throw InputError("toggle file names unknown guard " + std::to_string(g));
    }
    disabled.insert(g);
  }
  return poco::toggles_for(t.ip, disabled);
}

void write_text(const fs::path& p, const std::string& data) {
  fs::create_directories(p.parent_path().empty() ? "." : p.parent_path());
  poco::write_file(p, data);
}

void emit(const std::string& outPath, const std::string& data) {
  if (outPath.empty()) {
    std::cout << data;
  } else {
    write_text(outPath, data);
  }
}

// Shared tunables; config file (JSON) fills any value the flags left untouched.
struct CommonConfig {
  std::int64_t stepBudget = poco::kDefaultStepBudget;
  double wallBudget = 7200.0;
  std::int32_t maxRounds = 10000;
  std::uint64_t rngSeed = 0;
  std::int64_t execs = 10000;
  std::int64_t trials = 30;
  bool toggleLoops = false;

  ordered_json to_json() const {
    return {{"step_budget", stepBudget}, {"wall_budget_seconds", wallBudget},
            {"max_rounds", maxRounds},   {"rng_seed", rngSeed},
            {"execs", execs},            {"trials", trials},
            {"toggle_loops", toggleLoops}};
  }
};

struct ConfigBinding {
  CLI::App* cmd = nullptr;
  CommonConfig* cfg = nullptr;
  std::string configFile;
  CLI::Option* oBudget = nullptr;
  CLI::Option* oWall = nullptr;
  CLI::Option* oRounds = nullptr;
  CLI::Option* oRng = nullptr;
  CLI::Option* oExecs = nullptr;
  CLI::Option* oTrials = nullptr;
  CLI::Option* oLoops = nullptr;

  // Precedence: flags > config file > defaults.
  void resolve() const {
    if (configFile.empty()) return;
    ordered_json j;
    try {
      j = ordered_json::parse(slurp(configFile));
    } catch (const std::exception& e) {
      throw InputError(std::string("bad config file: ") + e.what());
    }
    auto apply = [&](CLI::Option* opt, const char* key, auto& field) {
      if (opt && opt->count() == 0 && j.contains(key)) {
        field = j[key].get<std::decay_t<decltype(field)>>();
      }
    };
    apply(oBudget, "step_budget", cfg->stepBudget);
    apply(oWall, "wall_budget_seconds", cfg->wallBudget);
    apply(oRounds, "max_rounds", cfg->maxRounds);
    apply(oRng, "rng_seed", cfg->rngSeed);
    apply(oExecs, "execs", cfg->execs);
    apply(oTrials, "trials", cfg->trials);
    apply(oLoops, "toggle_loops", cfg->toggleLoops);
  }
};

ConfigBinding bind_config(CLI::App* cmd, CommonConfig* cfg) {
  ConfigBinding b;
  b.cmd = cmd;
  b.cfg = cfg;
  cmd->add_option("--config", b.configFile, "JSON config file (flags win over file)");
  b.oBudget = cmd->add_option("--budget", cfg->stepBudget, "interpreter step budget");
  b.oWall = cmd->add_option("--wall-budget", cfg->wallBudget, "selection wall budget, seconds");
  b.oRounds = cmd->add_option("--max-rounds", cfg->maxRounds, "selection round cap");
  b.oRng = cmd->add_option("--rng-seed", cfg->rngSeed, "rng seed");
  b.oExecs = cmd->add_option("--execs", cfg->execs, "fuzzing execution budget");
  b.oTrials = cmd->add_option("--trials", cfg->trials, "evaluation trial count");
  b.oLoops = cmd->add_flag("--toggle-loops", cfg->toggleLoops, "make loop guards toggleable");
  return b;
}

ordered_json guard_table_json(const poco::Target& t) {
  ordered_json guards = ordered_json::array();
  for (const auto& g : t.ip.program.guards) {
    guards.push_back({{"id", g.id},
                      {"line", g.line},
                      {"col", g.col},
                      {"kind", g.kind == poco::GuardKind::While ? "while" : "if"},
                      {"toggleable", static_cast<bool>(t.ip.toggleable[static_cast<std::size_t>(g.id)])}});
  }
  return guards;
}

ordered_json hierarchy_json(const poco::GuardHierarchy& h) {
  ordered_json j;
  j["schema_version"] = poco::kSchemaVersion;
  ordered_json edges = ordered_json::array();
  ordered_json roots = ordered_json::array();
  for (poco::GuardId g = 0; g < h.guardCount; ++g) {
    auto p = h.parent[static_cast<std::size_t>(g)];
    if (p == poco::kVirtualRoot) {
      roots.push_back(g);
    } else {
      edges.push_back({p, g});
    }
  }
  j["guard_count"] = h.guardCount;
  j["edges"] = edges;
  j["virtual_root_children"] = roots;
  return j;
}

ordered_json toggle_vector_json(std::size_t guardCount, const std::vector<poco::GuardId>& disabled) {
  std::vector<poco::GuardId> sorted = disabled;
  std::sort(sorted.begin(), sorted.end());
  return {{"schema_version", poco::kSchemaVersion},
          {"guard_count", guardCount},
          {"disabled", sorted}};
}

// ---------------------------------------------------------------------------

int cmd_parse(const std::string& program) {
  auto pr = poco::parse(slurp(program));
  if (!pr.ok()) {
    for (const auto& d : pr.diagnostics) {
      std::cerr << poco::format_diagnostic(program, d) << "\n";
    }
    return kExitInput;
  }
  const auto& p = *pr.program;
  ordered_json j;
  j["schema_version"] = poco::kSchemaVersion;
  j["functions"] = ordered_json::array();
  for (const auto& f : p.functions) {
    j["functions"].push_back(
        {{"name", f.name}, {"has_input", f.hasInput}, {"statements", f.body.size()}});
  }
  j["entry"] = p.functions[static_cast<std::size_t>(p.entry)].name;
  j["guards"] = p.guards.size();
  j["labels"] = p.labels;
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_instrument(const std::string& program, const std::string& outDir, bool toggleLoops) {
  poco::Target t = load_target(program, toggleLoops);
  fs::create_directories(outDir);
  std::vector<bool> toggleable(t.ip.toggleable.begin(), t.ip.toggleable.end());
  write_text(fs::path(outDir) / "instrumented.gl",
             poco::pretty_print_instrumented(t.ip.program, toggleable));
  ordered_json gt;
  gt["schema_version"] = poco::kSchemaVersion;
  gt["guards"] = guard_table_json(t);
  write_text(fs::path(outDir) / "guards.json", gt.dump(2) + "\n");
  poco::GuardHierarchy h = poco::extract_hierarchy(t.ip);
  write_text(fs::path(outDir) / "hierarchy.json", hierarchy_json(h).dump(2) + "\n");
  return kExitOk;
}

int cmd_run(const std::string& program, const std::string& seedFile, const std::string& corpusDir,
            const std::string& togglePath, const CommonConfig& cfg, const std::string& outPath) {
  poco::Target t = load_target(program, cfg.toggleLoops);
  poco::ToggleVector tv = load_toggles(t, togglePath);
  poco::Corpus corpus;
  if (!seedFile.empty()) {
    corpus.push_back(poco::Seed{fs::path(seedFile).stem().string(), slurp(seedFile)});
  } else {
    corpus = load_corpus(corpusDir);
  }
  ordered_json j;
  j["schema_version"] = poco::kSchemaVersion;
  j["seeds"] = ordered_json::array();
  for (const auto& s : corpus) {
    poco::ExecOutcome out = poco::execute(t, tv, s, cfg.stepBudget);
    ordered_json one = poco::outcome_json(out);
    one.erase("schema_version");
    one["id"] = s.id;
    // keep id first for readability
    ordered_json reordered;
    reordered["id"] = s.id;
    for (auto& [k, v] : one.items()) {
      if (k != "id") reordered[k] = v;
    }
    j["seeds"].push_back(reordered);
  }
  emit(outPath, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_cmin(const std::string& program, const std::string& corpusDir, const std::string& outDir,
             const std::string& togglePath, const CommonConfig& cfg) {
  poco::Target t = load_target(program, cfg.toggleLoops);
  poco::Corpus corpus = load_corpus(corpusDir);
  poco::ToggleVector tv = load_toggles(t, togglePath);
  poco::CminResult r = poco::cmin(t, tv, corpus, cfg.stepBudget);
  fs::create_directories(fs::path(outDir) / "seeds");
  poco::Corpus sorted = r.selected;
  std::sort(sorted.begin(), sorted.end(),
            [](const poco::Seed& a, const poco::Seed& b) { return a.id < b.id; });
  poco::write_manifest(sorted, fs::path(outDir) / "selected.manifest");
  for (const auto& s : sorted) write_text(fs::path(outDir) / "seeds" / s.id, s.bytes);
  return kExitOk;
}

int cmd_poco(const std::string& program, const std::string& corpusDir, const std::string& outDir,
             const CommonConfig& cfg) {
  poco::Target t = load_target(program, cfg.toggleLoops);
  poco::Corpus corpus = load_corpus(corpusDir);
  poco::SelectConfig sc;
  sc.stepBudget = cfg.stepBudget;
  sc.wallBudgetSeconds = cfg.wallBudget;
  sc.maxRounds = cfg.maxRounds;
  sc.rngSeed = cfg.rngSeed;
  poco::SelectionResult res;
  try {
    res = poco::select(t, corpus, sc);
  } catch (const poco::BaselinePreconditionError& e) {
    std::cerr << "precondition violated: baseline run crashes for seeds:";
    for (const auto& id : e.faultingSeeds) std::cerr << " " << id;
    std::cerr << "\n";
    return kExitPrecondition;
  }
  fs::create_directories(outDir);
  auto byId = [](poco::Corpus c) {
    std::sort(c.begin(), c.end(),
              [](const poco::Seed& a, const poco::Seed& b) { return a.id < b.id; });
    return c;
  };
  poco::write_manifest(byId(res.selected), fs::path(outDir) / "selected.manifest");
  poco::write_manifest(byId(res.delta), fs::path(outDir) / "delta.manifest");
  write_text(fs::path(outDir) / "trace.jsonl", poco::trace_jsonl(res));
  write_text(fs::path(outDir) / "final_toggles.json",
             toggle_vector_json(t.guardCount(), res.finalDisabled).dump(2) + "\n");
  write_text(fs::path(outDir) / "timing.json",
             poco::timing_json(res.timings).dump(2) + "\n");
  ordered_json summary;
  summary["schema_version"] = poco::kSchemaVersion;
  summary["termination"] = res.terminationReason;
  summary["rounds"] = res.trace.size();
  summary["rng_seed"] = cfg.rngSeed;
  summary["reckless"] = std::vector<poco::GuardId>(res.reckless.begin(), res.reckless.end());
  summary["base_cmin"] = res.baseCminIds;
  write_text(fs::path(outDir) / "summary.json", summary.dump(2) + "\n");
  return kExitOk;
}

int cmd_fuzz(const std::string& program, const std::string& corpusDir, const std::string& outDir,
             const CommonConfig& cfg) {
  poco::Target t = load_target(program, cfg.toggleLoops);
  poco::Corpus corpus = load_corpus(corpusDir);
  poco::FuzzReport rep = poco::fuzz(t, corpus, cfg.execs, cfg.rngSeed, cfg.stepBudget);
  fs::create_directories(fs::path(outDir) / "crashes");
  write_text(fs::path(outDir) / "report.json", poco::fuzz_report_json(rep).dump(2) + "\n");
  for (const auto& c : rep.crashes) {
    write_text(fs::path(outDir) / "crashes" / (c.label + "-" + std::to_string(c.execIndex)),
               c.input);
  }
  return kExitOk;
}

int cmd_eval(const std::string& program, const std::string& baseDir,
             const std::string& candidateFile, const CommonConfig& cfg,
             const std::string& outPath) {
  poco::Target t = load_target(program, cfg.toggleLoops);
  poco::Corpus base = load_corpus(baseDir);
  poco::Seed candidate{fs::path(candidateFile).stem().string(), slurp(candidateFile)};
  for (const auto& s : base) {
    if (s.id == candidate.id) throw InputError("candidate id collides with base seed " + s.id);
  }
  std::vector<std::uint64_t> rngSeeds;
  for (std::int64_t i = 0; i < cfg.trials; ++i) rngSeeds.push_back(cfg.rngSeed + static_cast<std::uint64_t>(i));
  poco::SeedImprovementReport rep =
      poco::seed_improvement(t, base, candidate, cfg.execs, rngSeeds, cfg.stepBudget);
  ordered_json j;
  j["schema_version"] = poco::kSchemaVersion;
  j["holds"] = rep.holds;
  j["trials"] = rep.trials.size();
  j["trials_with_gain"] = rep.trialsWithGain;
  j["delta_findings"] = ordered_json::array();
  for (const auto& tr : rep.trials) {
    j["delta_findings"].push_back({{"rng_seed", tr.rngSeed}, {"findings", tr.deltaFindings}});
  }
  emit(outPath, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_report(const std::string& timingFile, const std::string& format) {
  ordered_json j;
  try {
    j = ordered_json::parse(slurp(timingFile));
  } catch (const std::exception& e) {
    throw InputError(std::string("bad timing file: ") + e.what());
  }
  if (!j.contains("rounds")) throw InputError("timing file has no rounds");
  std::vector<poco::RoundTiming> timings;
  for (const auto& r : j["rounds"]) {
    poco::RoundTiming t;
    t.cminSeconds = r.value("cmin_s", 0.0);
    t.crashingSeconds = r.value("crashing_s", 0.0);
    t.crashingProbeSeconds = r.value("crashing_probe_s", 0.0);
    t.convergingSeconds = r.value("converging_s", 0.0);
    t.hierarchySeconds = r.value("hierarchy_s", 0.0);
    t.guardOpSeconds = r.value("guard_ops_s", 0.0);
    t.probes = r.value("probes", std::int64_t{0});
    timings.push_back(t);
  }
  std::cout << poco::composition_report(poco::compose_time(timings), format);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"poco: guard-aware seed selection laboratory"};
  app.require_subcommand(1);
  bool showConfig = false;
  app.add_flag("--show-config", showConfig, "print effective defaults as JSON and exit");

  CommonConfig cfg;
  std::string program, corpusDir, outDir, outPath, seedFile, togglePath, baseDir, candidateFile,
      timingFile, format = "text";

  auto* cParse = app.add_subcommand("parse", "parse a program and report a summary");
  cParse->add_option("program", program)->required();

  auto* cInstr = app.add_subcommand("instrument", "emit instrumented program, guard table, hierarchy");
  cInstr->add_option("program", program)->required();
  cInstr->add_option("--out-dir", outDir)->required();
  ConfigBinding bInstr = bind_config(cInstr, &cfg);

  auto* cRun = app.add_subcommand("run", "execute seeds and report outcomes");
  cRun->add_option("program", program)->required();
  cRun->add_option("--seed", seedFile);
  cRun->add_option("--corpus", corpusDir);
  cRun->add_option("--toggles", togglePath);
  cRun->add_option("--out", outPath);
  ConfigBinding bRun = bind_config(cRun, &cfg);

  auto* cCmin = app.add_subcommand("cmin", "greedy corpus minimization");
  cCmin->add_option("program", program)->required();
  cCmin->add_option("--corpus", corpusDir)->required();
  cCmin->add_option("--out-dir", outDir)->required();
  cCmin->add_option("--toggles", togglePath);
  ConfigBinding bCmin = bind_config(cCmin, &cfg);

  auto* cPoco = app.add_subcommand("poco", "iterative guard-aware seed selection");
  cPoco->add_option("program", program)->required();
  cPoco->add_option("--corpus", corpusDir)->required();
  cPoco->add_option("--out-dir", outDir)->required();
  ConfigBinding bPoco = bind_config(cPoco, &cfg);

  auto* cFuzz = app.add_subcommand("fuzz", "deterministic mutational fuzzing");
  cFuzz->add_option("program", program)->required();
  cFuzz->add_option("--corpus", corpusDir)->required();
  cFuzz->add_option("--out-dir", outDir)->required();
  ConfigBinding bFuzz = bind_config(cFuzz, &cfg);

  auto* cEval = app.add_subcommand("eval", "paired-trial seed-improvement evaluation");
  cEval->add_option("program", program)->required();
  cEval->add_option("--base", baseDir)->required();
  cEval->add_option("--candidate", candidateFile)->required();
  cEval->add_option("--out", outPath);
  ConfigBinding bEval = bind_config(cEval, &cfg);

  auto* cReport = app.add_subcommand("report", "render a time-composition report");
  cReport->add_option("timing", timingFile)->required();
  cReport->add_option("--format", format)->check(CLI::IsMember({"json", "csv", "text"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (showConfig) {
      std::cout << CommonConfig{}.to_json().dump(2) << "\n";
      return kExitOk;
    }
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  if (showConfig) {
    std::cout << CommonConfig{}.to_json().dump(2) << "\n";
    return kExitOk;
  }

  try {
    for (const ConfigBinding* b : {&bInstr, &bRun, &bCmin, &bPoco, &bFuzz, &bEval}) {
      if (b->cmd->parsed()) b->resolve();
    }
    if (cParse->parsed()) return cmd_parse(program);
    if (cInstr->parsed()) return cmd_instrument(program, outDir, cfg.toggleLoops);
    if (cRun->parsed()) {
      if (seedFile.empty() == corpusDir.empty()) {
        std::cerr << "run needs exactly one of --seed / --corpus\n";
        return kExitUsage;
      }
      return cmd_run(program, seedFile, corpusDir, togglePath, cfg, outPath);
    }
    if (cCmin->parsed()) return cmd_cmin(program, corpusDir, outDir, togglePath, cfg);
    if (cPoco->parsed()) return cmd_poco(program, corpusDir, outDir, cfg);
    if (cFuzz->parsed()) return cmd_fuzz(program, corpusDir, outDir, cfg);
    if (cEval->parsed()) return cmd_eval(program, baseDir, candidateFile, cfg, outPath);
    if (cReport->parsed()) return cmd_report(timingFile, format);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitUsage;
}
