#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "poco/corpus.hpp"
#include "poco/fuzz.hpp"
#include "poco/metrics.hpp"
#include "poco/select.hpp"

namespace poco {

inline constexpr const char* kSchemaVersion = "1";

inline nlohmann::ordered_json round_to_json(const RoundRecord& r) {
  nlohmann::ordered_json j;
  j["round"] = r.round;
  j["s_begin"] = r.sBegin;
  j["s_end"] = r.sEnd;
  j["s_new"] = r.sNew;
  j["s_increment"] = r.sIncrement;
  j["disabled_at_cmin"] = r.disabledAtCmin;
  j["newly_disabled"] = r.newlyDisabled;
  j["newly_reckless"] = r.newlyReckless;
  j["passed_raw"] = r.passedRaw;
  j["passed_fresh"] = r.passedFresh;
  j["outermost"] = r.outermost;
  j["aggregate"] = r.aggregate;
  j["seeds_stable"] = r.seedsStable;
  j["no_reckless"] = r.noReckless;
  j["no_passed"] = r.noPassed;
  j["no_outermost"] = r.noOutermost;
  j["fixed_point"] = r.fixedPoint();
  return j;
}

// Deterministic line-delimited JSON; wall times live in the timing file.
inline std::string trace_jsonl(const SelectionResult& res) {
  std::string out;
  for (const auto& r : res.trace) out += round_to_json(r).dump() + "\n";
  return out;
}

struct TimeComposition {
  double cmin = 0.0;
  double crashing = 0.0;
  double crashingProbe = 0.0;
  double converging = 0.0;
  double hierarchy = 0.0;
  double guardOps = 0.0;
  std::int64_t probes = 0;

  double total() const { return cmin + crashing + converging + hierarchy + guardOps; }
};

inline TimeComposition compose_time(const std::vector<RoundTiming>& timings) {
  TimeComposition c;
  for (const auto& t : timings) {
    c.cmin += t.cminSeconds;
    c.crashing += t.crashingSeconds;
    c.crashingProbe += t.crashingProbeSeconds;
    c.converging += t.convergingSeconds;
    c.hierarchy += t.hierarchySeconds;
    c.guardOps += t.guardOpSeconds;
    c.probes += t.probes;
  }
  return c;
}

inline nlohmann::ordered_json timing_json(const std::vector<RoundTiming>& timings) {
  auto c = compose_time(timings);
  double total = c.total();
  auto pct = [&](double v) { return total > 0 ? 100.0 * v / total : 0.0; };
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["rounds"] = nlohmann::ordered_json::array();
  for (const auto& t : timings) {
    j["rounds"].push_back({{"cmin_s", t.cminSeconds},
                           {"crashing_s", t.crashingSeconds},
                           {"crashing_probe_s", t.crashingProbeSeconds},
                           {"converging_s", t.convergingSeconds},
                           {"hierarchy_s", t.hierarchySeconds},
                           {"guard_ops_s", t.guardOpSeconds},
                           {"probes", t.probes}});
  }
  j["total_s"] = total;
  j["categories"] = {{"cmin_pct", pct(c.cmin)},
                     {"crashing_pct", pct(c.crashing)},
                     {"converging_pct", pct(c.converging)},
                     {"hierarchy_pct", pct(c.hierarchy)},
                     {"guard_ops_pct", pct(c.guardOps)}};
  j["crashing_probe_s"] = c.crashingProbe;
  j["probes"] = c.probes;
  return j;
}

inline std::string composition_report(const TimeComposition& c, const std::string& format) {
  double total = c.total();
  auto pct = [&](double v) { return total > 0 ? 100.0 * v / total : 0.0; };
  struct Row {
    const char* name;
    double seconds;
  };
  std::vector<Row> rows = {{"cmin", c.cmin},
                           {"crashing_reckless", c.crashing},
                           {"converging_reckless", c.converging},
                           {"hierarchy_parsing", c.hierarchy},
                           {"guard_operations", c.guardOps}};
  if (format == "json") {
    nlohmann::ordered_json j;
    j["schema_version"] = kSchemaVersion;
    for (const auto& r : rows) {
      j[r.name] = {{"seconds", r.seconds}, {"percent", pct(r.seconds)}};
    }
    j["total_seconds"] = total;
    return j.dump(2) + "\n";
  }
  std::string out;
  if (format == "csv") {
    out = "category,seconds,percent\n";
    for (const auto& r : rows) {
      out += std::string(r.name) + "," + std::to_string(r.seconds) + "," +
             std::to_string(pct(r.seconds)) + "\n";
    }
    return out;
  }
  for (const auto& r : rows) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%-22s %10.4fs %6.2f%%\n", r.name, r.seconds,
                  pct(r.seconds));
    out += buf;
  }
  return out;
}

inline nlohmann::ordered_json verdict_json(const Verdict& v) {
  nlohmann::ordered_json j;
  switch (v.kind) {
    case VerdictKind::Ok: j["kind"] = "ok"; break;
    case VerdictKind::Bug: j["kind"] = "bug"; break;
    case VerdictKind::Timeout: j["kind"] = "timeout"; break;
    case VerdictKind::Fault: j["kind"] = "fault"; break;
  }
  if (!v.detail.empty()) j["detail"] = v.detail;
  return j;
}

inline std::string bitmap_hex(const std::vector<std::uint8_t>& bits) {
  // packed little-endian bit order, 4 bits per hex digit
  std::string out;
  static const char* digits = "0123456789abcdef";
  for (std::size_t i = 0; i < bits.size(); i += 4) {
    int v = 0;
    for (std::size_t k = 0; k < 4 && i + k < bits.size(); ++k) {
      if (bits[i + k]) v |= 1 << k;
    }
    out.push_back(digits[v]);
  }
  return out.empty() ? "0" : out;
}

inline nlohmann::ordered_json outcome_json(const ExecOutcome& out) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["verdict"] = verdict_json(out.verdict);
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : out.edges) edges.push_back({e.first, e.second});
  j["edges"] = edges;
  j["cond_sat"] = bitmap_hex(out.condSat);
  j["branch_entered"] = bitmap_hex(out.branchEntered);
  j["steps"] = out.steps;
  return j;
}

inline nlohmann::ordered_json fuzz_report_json(const FuzzReport& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["executions"] = r.executions;
  j["queue_size"] = r.queue.size();
  auto crashes = nlohmann::ordered_json::array();
  for (const auto& c : r.crashes) {
    crashes.push_back({{"label", c.label},
                       {"exec_index", c.execIndex},
                       {"input_fnv1a64", hex64(fnv1a64(c.input))}});
  }
  j["crashes"] = crashes;
  auto timeline = nlohmann::ordered_json::array();
  for (const auto& [i, n] : r.edgeTimeline) timeline.push_back({i, n});
  j["edge_timeline"] = timeline;
  j["final_edge_count"] = r.finalEdges.size();
  return j;
}

}  // namespace poco
