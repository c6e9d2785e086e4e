#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gem3d/types.hpp"

namespace gem3d {

struct TileConfig;

/// Energy charged for one event kind inside one phase.
struct EnergyEntry {
  std::string phase;
  std::string event;
  Layer layer = Layer::A_SRAM;
  std::uint64_t count = 0;
  double energy_j = 0.0;
};

/// Wall-clock slot occupied by one phase.
struct PhaseTiming {
  std::string phase;
  std::uint64_t cycles = 0;
  double latency_s = 0.0;
};

/// Per-phase event counts, energy and latency of one simulated job.
class CostLedger {
 public:
  /// Charges count events at the configured joules-per-event for key.
  void charge(const TileConfig& config, std::string_view event_key, std::uint64_t count);
  /// Appends a phase slot; consecutive slots with the same name merge.
  void add_phase(std::string_view phase, std::uint64_t cycles, double latency_s);
  /// Non-energy counters (write-strength overdrive, supply boosts, ...).
  void note(std::string_view flag, std::uint64_t count = 1);

  void merge(const CostLedger& other);

  const std::vector<EnergyEntry>& energy() const noexcept { return energy_; }
  const std::vector<PhaseTiming>& phases() const noexcept { return phases_; }
  const std::map<std::string, std::uint64_t>& flags() const noexcept { return flags_; }

  std::uint64_t flag(std::string_view name) const;
  std::uint64_t events(std::string_view event_key) const;
  const PhaseTiming* phase(std::string_view name) const;

  double total_energy_j() const;
  double total_latency_s() const;
  std::uint64_t total_cycles() const;
  bool empty() const noexcept { return energy_.empty() && phases_.empty(); }

 private:
  std::vector<EnergyEntry> energy_;
  std::vector<PhaseTiming> phases_;
  std::map<std::string, std::uint64_t> flags_;
};

}  // namespace gem3d
