#include "gem3d/report.hpp"

#include <fmt/format.h>
#include <json.hpp>

namespace gem3d {

namespace {

using nlohmann::json;

// Round-trip precision keeps reruns byte-identical and lossless.
std::string num(double v) { return fmt::format("{}", v); }

json to_json(const ThroughputRow& r) {
  return {{"op", r.op},
          {"n", r.n},
          {"ops", r.report.ops_count},
          {"latency_s", r.report.latency_s},
          {"energy_j", r.report.energy_j},
          {"gops", r.report.gops},
          {"gops_per_w", r.report.gops_per_w}};
}

}  // namespace

std::string provenance_line(std::uint64_t seed, std::string_view config_hash) {
  return fmt::format("# seed={} config_hash={}", seed, config_hash);
}

std::string linearity_csv(const std::vector<LinearityRow>& rows, std::string_view provenance) {
  std::string out = fmt::format("{}\nideal,expected,mean,std,samples\n", provenance);
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{}\n", r.ideal, num(r.expected), num(r.mean), num(r.std),
                       r.samples);
  }
  return out;
}

std::string energy_csv(const std::vector<EnergyShare>& shares, std::string_view provenance) {
  std::string out = fmt::format("{}\nphase,layer,joules,fraction\n", provenance);
  for (const auto& s : shares) {
    out += fmt::format("{},{},{},{}\n", s.phase, to_string(s.layer), num(s.joules),
                       num(s.fraction));
  }
  return out;
}

std::string throughput_csv(const std::vector<ThroughputRow>& rows,
                           std::string_view provenance) {
  std::string out =
      fmt::format("{}\nop,n,ops,latency_s,energy_j,gops,gops_per_w\n", provenance);
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{}\n", r.op, r.n, r.report.ops_count,
                       num(r.report.latency_s), num(r.report.energy_j), sig4(r.report.gops),
                       sig4(r.report.gops_per_w));
  }
  return out;
}

std::string ledger_csv(const CostLedger& ledger, std::string_view provenance) {
  std::string out = fmt::format("{}\nphase,event,layer,count,energy_j\n", provenance);
  for (const auto& e : ledger.energy()) {
    out += fmt::format("{},{},{},{},{}\n", e.phase, e.event, to_string(e.layer), e.count,
                       num(e.energy_j));
  }
  return out;
}

std::string phases_csv(const CostLedger& ledger, std::string_view provenance) {
  std::string out = fmt::format("{}\nphase,cycles,latency_s\n", provenance);
  for (const auto& p : ledger.phases()) {
    out += fmt::format("{},{},{}\n", p.phase, p.cycles, num(p.latency_s));
  }
  return out;
}

std::string summary_json(const RunSummary& s) {
  json doc;
  doc["command"] = s.command;
  doc["seed"] = s.seed;
  doc["config_hash"] = s.config_hash;
  doc["outputs"] = s.outputs;
  json tp = json::array();
  for (const auto& r : s.throughput) tp.push_back(to_json(r));
  doc["throughput"] = tp;
  json energy = json::array();
  for (const auto& e : s.energy) {
    energy.push_back({{"phase", e.phase},
                      {"layer", std::string(to_string(e.layer))},
                      {"joules", e.joules},
                      {"fraction", e.fraction}});
  }
  doc["energy"] = energy;
  json lin = json::object();
  for (const auto& [name, rows] : s.linearity) {
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"ideal", r.ideal},
                     {"expected", r.expected},
                     {"mean", r.mean},
                     {"std", r.std},
                     {"samples", r.samples}});
    }
    lin[name] = arr;
  }
  doc["linearity"] = lin;
  doc["values"] = s.values;
  doc["counters"] = s.counters;
  doc["notes"] = s.notes;
  return doc.dump(2) + "\n";
}

}  // namespace gem3d
