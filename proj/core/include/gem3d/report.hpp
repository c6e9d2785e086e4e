#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gem3d/ledger.hpp"
#include "gem3d/metrics.hpp"

namespace gem3d {

/// First line of every output file: "# seed=<seed> config_hash=<hash>".
std::string provenance_line(std::uint64_t seed, std::string_view config_hash);

struct ThroughputRow {
  std::string op;
  std::size_t n = 0;
  ThroughputReport report;
};

// CSV writers. Each takes the provenance line (without newline) as header.
std::string linearity_csv(const std::vector<LinearityRow>& rows, std::string_view provenance);
std::string energy_csv(const std::vector<EnergyShare>& shares, std::string_view provenance);
std::string throughput_csv(const std::vector<ThroughputRow>& rows, std::string_view provenance);
/// Per-event ledger: phase, event, layer, count, energy_j; then per-phase
/// timing: phase, cycles, latency_s.
std::string ledger_csv(const CostLedger& ledger, std::string_view provenance);
std::string phases_csv(const CostLedger& ledger, std::string_view provenance);

/// Machine-readable run summary mirroring the CSVs.
struct RunSummary {
  std::string command;
  std::uint64_t seed = 0;
  std::string config_hash;
  std::vector<std::string> outputs;
  std::vector<ThroughputRow> throughput;
  std::vector<EnergyShare> energy;
  std::map<std::string, std::vector<LinearityRow>> linearity;
  std::map<std::string, double> values;
  std::map<std::string, std::uint64_t> counters;
  std::map<std::string, std::string> notes;
};

std::string summary_json(const RunSummary& summary);

}  // namespace gem3d
