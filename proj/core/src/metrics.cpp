#include "gem3d/metrics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "gem3d/errors.hpp"

namespace gem3d {

ThroughputReport throughput(std::uint64_t ops_count, double latency_s, double energy_j) {
  if (!(latency_s > 0.0)) throw SimError(ErrorKind::Argument, "latency must be > 0");
  if (!(energy_j > 0.0)) throw SimError(ErrorKind::Argument, "energy must be > 0");
  ThroughputReport r;
  r.ops_count = ops_count;
  r.latency_s = latency_s;
  r.energy_j = energy_j;
  r.gops = static_cast<double>(ops_count) / latency_s / 1e9;
  r.gops_per_w = static_cast<double>(ops_count) / energy_j / 1e9;
  return r;
}

std::string sig4(double value) {
  if (value == 0.0 || !std::isfinite(value)) return fmt::format("{}", value);
  const int mag = static_cast<int>(std::floor(std::log10(std::fabs(value))));
  const int decimals = std::max(0, 3 - mag);
  return fmt::format("{:.{}f}", value, decimals);
}

double ewise_level_sigma(EwiseOp op, double dac_sigma_lsb) {
  const double dac_level = dac_sigma_lsb / 15.0;
  return op == EwiseOp::Add ? std::sqrt(2.0) * dac_level / 2.0 : dac_level;
}

EnobReport estimate_enob(const WordPipeline& pipeline, double level_sigma, std::size_t trials,
                         unsigned grid_points_per_lsb, RandomStream& rng) {
  if (trials < 100) throw SimError(ErrorKind::Argument, "ENOB needs at least 100 trials");
  if (grid_points_per_lsb == 0) throw SimError(ErrorKind::Argument, "grid density must be > 0");
  const unsigned points = kMaxCount * grid_points_per_lsb + 1;
  double sum_sq = 0.0;
  std::uint64_t conversions = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    for (unsigned i = 0; i < points; ++i) {
      const double x = static_cast<double>(i) / grid_points_per_lsb;
      AnalogSample s;
      s.level = x / kMaxCount;
      if (level_sigma > 0.0) {
        s.level = clamp_unit(s.level + rng.normal(0.0, level_sigma));
        s.noise_sigma = level_sigma;
        s.noise_applied = true;
      }
      const double err = static_cast<double>(pipeline.convert(s).count) - x;
      sum_sq += err * err;
      ++conversions;
    }
  }
  EnobReport r;
  r.conversions = conversions;
  r.rms_error_lsb = std::sqrt(sum_sq / static_cast<double>(conversions));
  r.enob_bits = std::log2(kAdcLevels / (r.rms_error_lsb * std::sqrt(12.0)));
  return r;
}

double fit_enob_sigma(double target_bits, std::uint64_t seed, std::size_t trials,
                      unsigned grid_points_per_lsb, const LfsrLut& lut) {
  auto shared = std::make_shared<const LfsrLut>(lut);
  const WordPipeline pipeline(EwiseOp::Add, ComparatorModel{}, shared);
  auto enob_at = [&](double sigma) {
    RandomStream rng(seed, 0);
    return estimate_enob(pipeline, ewise_level_sigma(EwiseOp::Add, sigma), trials,
                         grid_points_per_lsb, rng)
        .enob_bits;
  };
  double lo = 0.0, hi = 2.0;
  for (int i = 0; i < 40; ++i) {
    const double mid = 0.5 * (lo + hi);
    (enob_at(mid) > target_bits ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

void LinearityAccumulator::add(unsigned ideal, double expected, double measured) {
  Acc& a = acc_[ideal];
  a.expected = expected;
  a.sum += measured;
  a.sum_sq += measured * measured;
  ++a.n;
}

void LinearityAccumulator::merge(const LinearityAccumulator& other) {
  for (const auto& [ideal, o] : other.acc_) {
    Acc& a = acc_[ideal];
    a.expected = o.expected;
    a.sum += o.sum;
    a.sum_sq += o.sum_sq;
    a.n += o.n;
  }
}

std::vector<LinearityRow> LinearityAccumulator::rows() const {
  std::vector<LinearityRow> out;
  out.reserve(acc_.size());
  for (const auto& [ideal, a] : acc_) {
    LinearityRow row;
    row.ideal = ideal;
    row.expected = a.expected;
    row.samples = a.n;
    row.mean = a.sum / static_cast<double>(a.n);
    const double var = a.sum_sq / static_cast<double>(a.n) - row.mean * row.mean;
    row.std = var > 0.0 ? std::sqrt(var) : 0.0;
    out.push_back(row);
  }
  return out;
}

double ideal_output(EwiseOp op, unsigned a, unsigned b) {
  if (op == EwiseOp::Add) return a + b;
  // Exact integer rounding, ties cannot occur (225 is odd).
  return static_cast<double>((2u * a * b * kMaxCount + kMulFullScale) / (2u * kMulFullScale));
}

namespace {

unsigned convert_pair(const WordPipeline& pipeline, const DacModel& dac,
                      const MultiplierModel& multiplier, unsigned a, unsigned b,
                      RandomStream* rng) {
  const AnalogSample va = dac_convert(Nibble(a), dac, rng);
  AnalogSample v;
  if (pipeline.op() == EwiseOp::Mul) {
    v = analog_multiply(va, Nibble(b), multiplier);
  } else {
    v = analog_add(va, dac_convert(Nibble(b), dac, rng));
  }
  return pipeline.decode_result(pipeline.convert(v).count);
}

}  // namespace

LinearityAccumulator linearity_sweep(const WordPipeline& pipeline, const DacModel& dac,
                                     const MultiplierModel& multiplier, std::size_t trials,
                                     RandomStream& rng) {
  LinearityAccumulator acc;
  const EwiseOp op = pipeline.op();
  for (std::size_t t = 0; t < trials; ++t) {
    for (unsigned a = 0; a <= 15; ++a) {
      for (unsigned b = 0; b <= 15; ++b) {
        const unsigned ideal = op == EwiseOp::Add ? a + b : a * b;
        acc.add(ideal, ideal_output(op, a, b),
                convert_pair(pipeline, dac, multiplier, a, b, &rng));
      }
    }
  }
  return acc;
}

std::vector<EnergyShare> energy_rollup(const CostLedger& ledger) {
  const double total = ledger.total_energy_j();
  if (ledger.energy().empty() || !(total > 0.0)) {
    throw SimError(ErrorKind::Argument, "energy rollup of an empty ledger");
  }
  std::vector<EnergyShare> out;
  for (const auto& e : ledger.energy()) {
    auto it = std::find_if(out.begin(), out.end(), [&](const EnergyShare& s) {
      return s.phase == e.phase && s.layer == e.layer;
    });
    if (it == out.end()) {
      out.push_back({e.phase, e.layer, 0.0, 0.0});
      it = out.end() - 1;
    }
    it->joules += e.energy_j;
  }
  for (auto& s : out) s.fraction = s.joules / total;
  return out;
}

std::vector<EnergyShare> layer_rollup(const CostLedger& ledger) {
  std::vector<EnergyShare> out;
  for (const auto& s : energy_rollup(ledger)) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const EnergyShare& o) { return o.layer == s.layer; });
    if (it == out.end()) {
      out.push_back({std::string(to_string(s.layer)), s.layer, 0.0, 0.0});
      it = out.end() - 1;
    }
    it->joules += s.joules;
    it->fraction += s.fraction;
  }
  return out;
}

std::vector<double> signal_margin_samples(const DacModel& dac, unsigned code, std::size_t draws,
                                          RandomStream& rng) {
  if (code >= 15) throw SimError(ErrorKind::Range, "signal margin needs code in 0..14");
  std::vector<double> out;
  out.reserve(draws);
  for (std::size_t i = 0; i < draws; ++i) {
    const double lo = dac_convert(Nibble(code), dac, &rng).level;
    const double hi = dac_convert(Nibble(code + 1), dac, &rng).level;
    out.push_back((hi - lo) * 15.0);
  }
  return out;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw SimError(ErrorKind::Argument, "KS statistic of no samples");
  std::sort(samples.begin(), samples.end());
  const double m = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / m - f, f - i / m});
  }
  return d;
}

McTrialResult run_mc_trial(const TileConfig& config, std::shared_ptr<const LfsrLut> lut,
                           std::uint64_t seed, std::uint64_t trial) {
  RandomStream rng(seed, trial);
  McTrialResult res;
  res.trial = trial;
  DacModel dac;
  dac.noise_sigma_lsb = config.variation.dac_sigma_lsb;
  const MultiplierModel multiplier{config.multiplier_gain_error, config.multiplier_offset_lsb};
  const AnalogSample known = known_input_for_count(config.calibration_known_count);

  for (EwiseOp op : {EwiseOp::Add, EwiseOp::Mul}) {
    const double sigma = config.variation.comparator_offset_sigma_lsb;
    const double offset = sigma > 0.0 ? std::round(rng.normal(0.0, sigma)) : 0.0;
    WordPipeline word(op, ComparatorModel{offset, {}}, lut);
    const CalibrationRecord rec = word.calibrate(known);
    const WordPipeline ideal(op, ComparatorModel{}, lut);
    for (unsigned a = 0; a <= 15; ++a) {
      for (unsigned b = 0; b <= 15; ++b) {
        if (convert_pair(word, DacModel{}, multiplier, a, b, nullptr) !=
            convert_pair(ideal, DacModel{}, multiplier, a, b, nullptr)) {
          ++res.calibration_mismatches;
        }
      }
    }
    auto acc = linearity_sweep(word, dac, multiplier, 1, rng);
    if (op == EwiseOp::Add) {
      res.add = std::move(acc);
      res.add_offset = rec.offset_counts;
    } else {
      res.mul = std::move(acc);
      res.mul_offset = rec.offset_counts;
    }
  }
  return res;
}

}  // namespace gem3d
