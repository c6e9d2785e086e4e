#include "gem3d/ledger.hpp"

#include "gem3d/config.hpp"

namespace gem3d {

void CostLedger::charge(const TileConfig& config, std::string_view event_key,
                        std::uint64_t count) {
  const EnergyEventInfo& info = energy_event(event_key);
  const double joules = config.energy_per_event(event_key) * static_cast<double>(count);
  for (auto& e : energy_) {
    if (e.event == event_key) {
      e.count += count;
      e.energy_j += joules;
      return;
    }
  }
  energy_.push_back(EnergyEntry{std::string(info.phase), std::string(event_key), info.layer,
                                count, joules});
}

void CostLedger::add_phase(std::string_view phase, std::uint64_t cycles, double latency_s) {
  if (!phases_.empty() && phases_.back().phase == phase) {
    phases_.back().cycles += cycles;
    phases_.back().latency_s += latency_s;
    return;
  }
  phases_.push_back(PhaseTiming{std::string(phase), cycles, latency_s});
}

void CostLedger::note(std::string_view flag, std::uint64_t count) {
  flags_[std::string(flag)] += count;
}

void CostLedger::merge(const CostLedger& other) {
  for (const auto& e : other.energy_) {
    bool merged = false;
    for (auto& mine : energy_) {
      if (mine.event == e.event) {
        mine.count += e.count;
        mine.energy_j += e.energy_j;
        merged = true;
        break;
      }
    }
    if (!merged) energy_.push_back(e);
  }
  for (const auto& p : other.phases_) add_phase(p.phase, p.cycles, p.latency_s);
  for (const auto& [k, v] : other.flags_) flags_[k] += v;
}

std::uint64_t CostLedger::flag(std::string_view name) const {
  auto it = flags_.find(std::string(name));
  return it == flags_.end() ? 0 : it->second;
}

std::uint64_t CostLedger::events(std::string_view event_key) const {
  for (const auto& e : energy_) {
    if (e.event == event_key) return e.count;
  }
  return 0;
}

const PhaseTiming* CostLedger::phase(std::string_view name) const {
  for (const auto& p : phases_) {
    if (p.phase == name) return &p;
  }
  return nullptr;
}

double CostLedger::total_energy_j() const {
  double sum = 0.0;
  for (const auto& e : energy_) sum += e.energy_j;
  return sum;
}

double CostLedger::total_latency_s() const {
  double sum = 0.0;
  for (const auto& p : phases_) sum += p.latency_s;
  return sum;
}

std::uint64_t CostLedger::total_cycles() const {
  std::uint64_t sum = 0;
  for (const auto& p : phases_) sum += p.cycles;
  return sum;
}

}  // namespace gem3d
