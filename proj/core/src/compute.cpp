#include "gem3d/compute.hpp"

#include <array>
#include <cmath>

#include <fmt/format.h>
#include <json.hpp>

#include "gem3d/analog.hpp"
#include "gem3d/errors.hpp"
#include "gem3d/matrix_io.hpp"

namespace gem3d {

namespace {

constexpr std::array<std::string_view, 7> kPhasePlan = {
    "load", "dac", "transfer", "analog_op", "seed_write", "conversion", "read"};

double overhead_share(std::string_view phase) {
  for (const auto& s : ewise_overhead_shares()) {
    if (s.phase == phase) return s.fraction;
  }
  return 0.0;
}

std::string key(EwiseOp op, std::string_view event) {
  return fmt::format("{}.{}", to_string(op), event);
}

DacModel dac_model(const TileConfig& config) {
  DacModel dac;
  dac.noise_sigma_lsb = config.variation.dac_sigma_lsb;
  return dac;
}

}  // namespace

EwiseLayout map_operands(EwiseOp op, const MatrixTile& a, const MatrixTile& b) {
  const std::size_t n = a.n();
  EwiseLayout layout{Grid<Byte>(n), Grid<Byte>(n)};
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const Byte av = a.at(r, c).value();
      const Byte bv = b.at(r, c).value();
      layout.layer_a_pairs(r, c) = static_cast<Byte>((av << 4) | bv);
      if (op == EwiseOp::Mul) layout.layer_b_words(r, c) = bv;
    }
  }
  return layout;
}

std::span<const std::string_view> ewise_phase_plan() { return kPhasePlan; }

PipelineBank::PipelineBank(EwiseOp op, std::size_t n, std::shared_ptr<const LfsrLut> lut,
                           const Grid<double>& offsets)
    : op_(op), n_(n) {
  if (offsets.n() != n) throw SimError(ErrorKind::Shape, "offset grid does not match bank size");
  words_.reserve(n * n);
  for (double off : offsets) words_.emplace_back(op, ComparatorModel{off, {}}, lut);
}

PipelineBank PipelineBank::create(EwiseOp op, std::size_t n, const TileConfig& config,
                                  std::shared_ptr<const LfsrLut> lut, RandomStream& rng) {
  Grid<double> offsets(n, 0.0);
  const double sigma = config.variation.comparator_offset_sigma_lsb;
  if (sigma > 0.0) {
    for (double& off : offsets) off = std::round(rng.normal(0.0, sigma));
  }
  return PipelineBank(op, n, std::move(lut), offsets);
}

void PipelineBank::calibrate_all(unsigned known_count) {
  const AnalogSample known = known_input_for_count(known_count);
  for (auto& w : words_) w.calibrate(known);
}

bool PipelineBank::all_calibrated() const {
  for (const auto& w : words_) {
    if (!w.calibrated()) return false;
  }
  return true;
}

EwiseResult run_ewise(const EwiseJob& job, const PipelineBank& bank, const TileConfig& config,
                      RandomStream& rng) {
  const std::size_t n = job.a.n();
  if (job.b.n() != n) {
    throw SimError(ErrorKind::Shape,
                   fmt::format("operand shapes differ: a is {0}x{0}, b is {1}x{1}", n, job.b.n()));
  }
  if (bank.n() != n || bank.op() != job.op) {
    throw SimError(ErrorKind::Shape, "pipeline bank does not match the job");
  }
  const bool calibrated = bank.all_calibrated();
  if (!calibrated && !job.allow_uncalibrated) {
    throw SimError(ErrorKind::Uncalibrated,
                   "pipeline is not calibrated; run calibration before computing");
  }

  const EwiseOp op = job.op;
  const bool mul = op == EwiseOp::Mul;
  const std::uint64_t words = static_cast<std::uint64_t>(n) * n;
  const double overhead = mul ? config.phase_overhead_mul_s : config.phase_overhead_add_s;
  const double adc_cycle = mul ? config.adc_cycle_mul_s : config.adc_cycle_add_s;
  const DacModel dac = dac_model(config);
  const MultiplierModel multiplier{config.multiplier_gain_error, config.multiplier_offset_lsb};

  EwiseResult res;
  res.op = op;
  res.counts = Grid<std::uint8_t>(n);
  res.codes = Grid<Byte>(n);
  res.values = Grid<std::uint16_t>(n);
  CostLedger& ledger = res.ledger;
  auto overhead_phase = [&](std::string_view phase) {
    ledger.add_phase(phase, 1, overhead * overhead_share(phase));
  };

  // 1. Operands into layer A (and b into layer B for multiplication).
  res.layout = map_operands(op, job.a, job.b);
  ledger.charge(config, key(op, "load"), words);
  if (mul) ledger.charge(config, "mul.load_b", words);
  overhead_phase("load");

  // 2. DAC generation, with the momentary supply boost.
  std::vector<AnalogSample> va(words), vb;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) va[r * n + c] = dac_convert(job.a.at(r, c), dac, &rng);
  }
  if (!mul) {
    vb.resize(words);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) vb[r * n + c] = dac_convert(job.b.at(r, c), dac, &rng);
    }
  }
  const std::uint64_t dac_events = mul ? words : 2 * words;
  ledger.charge(config, key(op, "dac"), dac_events);
  ledger.note("dac_supply_boost_events", dac_events);
  overhead_phase("dac");

  // 3. Analog values to the computing stage.
  ledger.charge(config, key(op, "transfer"), dac_events);
  overhead_phase("transfer");

  // 4. Multiply in layer B / add in the current domain.
  std::vector<AnalogSample> v(words);
  for (std::size_t i = 0; i < words; ++i) {
    const Coord at{i / n, i % n};
    v[i] = mul ? analog_multiply(va[i], job.b[at], multiplier) : analog_add(va[i], vb[i]);
  }
  ledger.charge(config, key(op, mul ? "multiply" : "add"), words);
  overhead_phase("analog_op");

  // 5. Counter preset (the seed, or the calibrated reference point).
  for (std::size_t i = 0; i < words; ++i) {
    res.layout.layer_b_words(i / n, i % n) = bank.word({i / n, i % n}).initial_state();
  }
  ledger.charge(config, key(op, "seed_write"), words);
  overhead_phase("seed_write");

  // 6. 64-cycle ramp comparison and LFSR counting.
  for (std::size_t i = 0; i < words; ++i) {
    const Coord at{i / n, i % n};
    const auto conv = bank.word(at).convert(v[i]);
    res.codes[at] = conv.code;
    res.counts[at] = static_cast<std::uint8_t>(conv.count);
    res.layout.layer_b_words[at] = conv.code;
  }
  ledger.charge(config, key(op, "conversion"), words);
  if (calibrated) ledger.charge(config, key(op, "calibration"), words);
  ledger.add_phase("conversion", kAdcLevels, adc_cycle * kAdcLevels);

  // 7. LUT decode on readout.
  for (std::size_t i = 0; i < words; ++i) {
    const Coord at{i / n, i % n};
    res.values[at] = static_cast<std::uint16_t>(bank.word(at).decode_result(res.counts[at]));
  }
  ledger.charge(config, key(op, "read"), words);
  overhead_phase("read");
  return res;
}

EwiseResult run_ewise(const EwiseJob& job, const TileConfig& config, RandomStream& rng) {
  auto lut = std::make_shared<const LfsrLut>(build_lut(config.lfsr_taps));
  PipelineBank bank = PipelineBank::create(job.op, job.a.n(), config, lut, rng);
  bank.calibrate_all(config.calibration_known_count);
  return run_ewise(job, bank, config, rng);
}

std::uint64_t ewise_ops(std::size_t n) { return static_cast<std::uint64_t>(n) * n * 8; }

MacResult run_mac(const MacJob& job, const TileConfig& config, const LfsrLut& lut,
                  RandomStream& rng) {
  const std::size_t n = job.weights.n();
  if (job.activations.size() != n) {
    throw SimError(ErrorKind::Shape, fmt::format("expected {} activations, got {}", n,
                                                 job.activations.size()));
  }
  std::size_t active = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (job.activations[i] > 1) {
      throw SimError(ErrorKind::Argument,
                     fmt::format("activation {} is {}, must be 0 or 1", i, job.activations[i]));
    }
    active += job.activations[i];
  }

  const DacModel dac = dac_model(config);
  MacResult res;
  res.full_scale = 15ull * active;
  res.column_sums.assign(n, 0);
  res.levels.assign(n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    if (job.activations[r] == 0) continue;
    for (std::size_t c = 0; c < n; ++c) {
      res.column_sums[c] += job.weights.at(r, c).value();
      res.levels[c] += dac_convert(job.weights.at(r, c), dac, &rng).level;
    }
  }
  for (double& l : res.levels) l = active ? clamp_unit(l / static_cast<double>(active)) : 0.0;

  CostLedger& ledger = res.ledger;
  const double overhead = config.phase_overhead_add_s;
  auto share = [&](std::initializer_list<std::string_view> phases) {
    double f = 0.0;
    for (auto p : phases) f += overhead_share(p);
    return overhead * f;
  };
  const std::uint64_t cols = n;
  ledger.add_phase("load", 1, share({"load"}));
  ledger.charge(config, "mac.dac", static_cast<std::uint64_t>(active) * n);
  ledger.add_phase("accumulate", 1, share({"dac", "analog_op"}));
  ledger.charge(config, "mac.transfer", cols);
  ledger.add_phase("transfer", 1, share({"transfer"}));
  if (job.quantize) {
    ledger.charge(config, "mac.seed_write", cols);
    ledger.add_phase("seed_write", 1, share({"seed_write"}));
    res.counts.resize(n);
    res.codes.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
      AnalogSample s;
      s.level = res.levels[c];
      const auto pc = count_pulses(delay_to_pulses(s, ComparatorModel{}), lut);
      res.counts[c] = static_cast<std::uint8_t>(pc.count);
      res.codes[c] = pc.code;
    }
    ledger.charge(config, "mac.conversion", cols);
    ledger.add_phase("conversion", kAdcLevels, config.adc_cycle_add_s * kAdcLevels);
    ledger.charge(config, "mac.read", cols);
    ledger.add_phase("read", 1, share({"read"}));
  }
  return res;
}

JobDescription load_job(const std::filesystem::path& path) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(read_text_file(path), nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw SimError(ErrorKind::Parse, fmt::format("job file {}: {}", path.string(), e.what()));
  }
  if (!doc.is_object()) throw SimError(ErrorKind::Parse, "job file root must be an object");
  const auto base = path.parent_path();
  JobDescription job;
  for (const auto& [k, v] : doc.items()) {
    try {
      if (k == "op") {
        job.op = v.get<std::string>();
      } else if (k == "a" || k == "b" || k == "act" || k == "out") {
        std::filesystem::path p = v.get<std::string>();
        if (p.is_relative()) p = base / p;
        (k == "a" ? job.a : k == "b" ? job.b : k == "act" ? job.act : job.out) = p;
      } else if (k == "trials") {
        job.trials = v.get<std::uint64_t>();
      } else if (k == "seed") {
        job.seed = v.get<std::uint64_t>();
      } else {
        throw SimError(ErrorKind::Parse, fmt::format("unknown job key '{}'", k));
      }
    } catch (const json::exception& e) {
      throw SimError(ErrorKind::Parse, fmt::format("job key '{}': {}", k, e.what()));
    }
  }
  if (job.op != "mul" && job.op != "add" && job.op != "mac") {
    throw SimError(ErrorKind::Parse, "job op must be mul, add or mac");
  }
  return job;
}

}  // namespace gem3d
