// Acceptance checks, one PASS/FAIL line per criterion.
//
//   gem3d_acceptance            run all ten
//   gem3d_acceptance --only 8   run one
//
// Exit status is the number of failing criteria run.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <gem3d/compute.hpp>
#include <gem3d/metrics.hpp>
#include <gem3d/transpose.hpp>

#include "oracles.hpp"

using namespace gem3d;

namespace {

// Tolerances.
constexpr double kPublishedRelTol = 1e-3;          // 0.1 % on published figures
constexpr double kEnergyRelTol = 1e-9;         // back-solved totals are exact
constexpr double kEnobTargetTol = 0.15;        // bits
constexpr double kTransposeBudgetS = 10.0;     // criterion 1 runtime
constexpr std::size_t kEnobMinConversions = 100000;

struct Verdict {
  bool pass;
  std::string detail;
};

bool within(double got, double want, double rel) {
  return std::fabs(got - want) <= rel * std::fabs(want);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

oracle::Rows random_rows(std::size_t n, RandomStream& rng) {
  oracle::Rows rows(n, std::vector<unsigned>(n));
  for (auto& r : rows)
    for (auto& v : r) v = static_cast<unsigned>(rng.uniform_int(0, 15));
  return rows;
}

oracle::Rows rows_of(const MatrixTile& t) {
  oracle::Rows rows(t.n(), std::vector<unsigned>(t.n()));
  for (std::size_t r = 0; r < t.n(); ++r)
    for (std::size_t c = 0; c < t.n(); ++c) rows[r][c] = t.at(r, c).value();
  return rows;
}

std::pair<MatrixTile, MatrixTile> all_pairs() {
  MatrixTile a(16, Layer::A_SRAM), b(16, Layer::A_SRAM);
  for (unsigned i = 0; i < 16; ++i)
    for (unsigned j = 0; j < 16; ++j) {
      a.set({i, j}, Nibble(i));
      b.set({i, j}, Nibble(j));
    }
  return {a, b};
}

std::shared_ptr<const LfsrLut> default_lut() {
  static auto lut = std::make_shared<const LfsrLut>(build_lut(default_config().lfsr_taps));
  return lut;
}

Verdict c1_transpose_property() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t sizes[] = {2, 3, 4, 8, 16, 32};
  const auto cfg = default_config();
  RandomStream rng(1001, 0);
  std::size_t bad = 0, involution_bad = 0, diag_writes = 0;
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = sizes[i % 6];
    const auto rows = random_rows(n, rng);
    const MatrixTile tile(rows, Layer::A_SRAM);
    const auto once = transpose_tile(tile, cfg);
    if (rows_of(once.layer_a.tile()) != oracle::transpose(rows)) ++bad;
    if (!transpose_tile(once.layer_a.tile(), cfg).layer_a.tile().same_values(tile))
      ++involution_bad;
    for (std::size_t d = 0; d < n; ++d)
      diag_writes += once.layer_a.write_counts()(d, d) + once.layer_b.write_counts()(d, d);
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {bad == 0 && involution_bad == 0 && diag_writes == 0 && secs < kTransposeBudgetS,
          fmt("500 matrices n in {2,3,4,8,16,32}: %zu wrong, %zu involution failures, "
              "%zu diagonal writes, %.2f s (budget %.0f s)",
              bad, involution_bad, diag_writes, secs, kTransposeBudgetS)};
}

Verdict c2_transpose_numbers() {
  const auto cfg = default_config();
  const auto schedule = compile_transpose(32);
  const auto run = transpose_tile(MatrixTile(32, Layer::A_SRAM), cfg);
  const double lat = run.ledger.total_latency_s();
  const double e = run.ledger.total_energy_j();
  const auto t = throughput(transpose_ops(32), lat, e);
  const bool ok = schedule.cycle_count() == 33 && run.ledger.total_cycles() == 33 &&
                  within(lat, 264e-9, 1e-12) && within(e, 320.55e-9, kEnergyRelTol) &&
                  within(t.gops, 15.51, kPublishedRelTol) && within(t.gops_per_w, 12.77, kPublishedRelTol);
  return {ok, fmt("%zu cycles, %.3f ns, %.4f nJ, %.4f GOPS (15.51), %.4f GOPS/W (12.77), "
                  "tol %.1f%%",
                  schedule.cycle_count(), lat * 1e9, e * 1e9, t.gops, t.gops_per_w,
                  kPublishedRelTol * 100)};
}

Verdict c3_worked_example() {
  TSramArray a(MatrixTile({{0, 8, 0, 12}, {5, 0, 0, 0}, {0, 0, 0, 0}, {3, 0, 0, 0}},
                          Layer::A_SRAM));
  TEdramArray b(MatrixTile({{0, 6, 0, 12}, {11, 0, 0, 0}, {0, 0, 0, 0}, {3, 0, 0, 0}},
                           Layer::B_EDRAM));
  const unsigned a12 = a.tile().at(0, 1).value(), a14 = a.tile().at(0, 3).value();
  const unsigned b21 = b.tile().at(1, 0).value(), b41 = b.tile().at(3, 0).value();
  intra_column_swap_step(a, 0, SwapDirection::LowerToUpper);
  intra_column_swap_step(b, 0, SwapDirection::UpperToLower);
  const unsigned a12n = a.tile().at(0, 1).value(), a14n = a.tile().at(0, 3).value();
  const unsigned b21n = b.tile().at(1, 0).value(), b41n = b.tile().at(3, 0).value();
  const bool ok = a12 == 8 && a12n == 5 && a14 == 12 && a14n == 3 && b21 == 11 && b21n == 6 &&
                  b41 == 3 && b41n == 12;
  return {ok, fmt("a12 %u->%u, a14 %u->%u, b21 %u->%u, b41 %u->%u (exact)", a12, a12n, a14,
                  a14n, b21, b21n, b41, b41n)};
}

Verdict c4_add_exact() {
  const auto [a, b] = all_pairs();
  RandomStream rng(4, 0);
  const auto res = run_ewise(EwiseJob{EwiseOp::Add, a, b}, default_config(), rng);
  std::size_t bad = 0;
  for (unsigned i = 0; i < 16; ++i)
    for (unsigned j = 0; j < 16; ++j) bad += res.values(i, j) != i + j;
  return {bad == 0, fmt("%zu of 256 operand pairs differ from a+b (exact)", bad)};
}

Verdict c5_mul_oracle() {
  const auto [a, b] = all_pairs();
  RandomStream rng(5, 0);
  const auto res = run_ewise(EwiseJob{EwiseOp::Mul, a, b}, default_config(), rng);
  std::size_t bad = 0;
  for (unsigned i = 0; i < 16; ++i)
    for (unsigned j = 0; j < 16; ++j) bad += res.counts(i, j) != oracle::mul_count(i, j);
  return {bad == 0, fmt("%zu of 256 operand pairs differ from round(a*b*63/225) (exact)", bad)};
}

Verdict c6_ewise_numbers() {
  const auto cfg = default_config();
  MatrixTile a(32, Layer::A_SRAM), b(32, Layer::A_SRAM);
  struct Want {
    EwiseOp op;
    double lat, gops, gops_w, cycle;
  };
  const Want wants[] = {{EwiseOp::Mul, 588e-9, 13.93, 436.61, 6e-9},
                        {EwiseOp::Add, 294e-9, 27.86, 432.25, 3e-9}};
  bool ok = true;
  std::string detail;
  for (const auto& w : wants) {
    RandomStream rng(6, 0);
    const auto res = run_ewise(EwiseJob{w.op, a, b}, cfg, rng);
    const auto* conv = res.ledger.phase("conversion");
    const auto t = throughput(ewise_ops(32), res.ledger.total_latency_s(),
                              res.ledger.total_energy_j());
    ok = ok && within(t.latency_s, w.lat, kPublishedRelTol) && within(t.gops, w.gops, kPublishedRelTol) &&
         within(t.gops_per_w, w.gops_w, kPublishedRelTol) && conv && conv->cycles == 64 &&
         within(conv->latency_s, 64 * w.cycle, 1e-12);
    detail += fmt("%s %.2f ns %.4f GOPS (%.2f) %.3f GOPS/W (%.2f) conv %llu x %.0f ns; ",
                  std::string(to_string(w.op)).c_str(), t.latency_s * 1e9, t.gops, w.gops,
                  t.gops_per_w, w.gops_w,
                  static_cast<unsigned long long>(conv ? conv->cycles : 0),
                  conv ? conv->latency_s / conv->cycles * 1e9 : 0.0);
  }
  return {ok, detail + fmt("tol %.1f%%", kPublishedRelTol * 100)};
}

Verdict c7_lfsr() {
  const auto& taps = default_config().lfsr_taps;
  const auto lut = build_lut(taps);
  std::set<Byte> distinct;
  LfsrState s{kLfsrSeed, taps};
  for (int i = 0; i < 64; ++i) {
    distinct.insert(s.bits);
    s = lfsr_step(s);
  }
  std::size_t bad = 0;
  for (unsigned k = 0; k < 64; ++k) bad += lut.decode(lut.encode(k)) != k;
  const std::size_t walk = oracle::walk_length(taps);
  return {distinct.size() == 64 && bad == 0 && walk >= 64 && lut.period() == walk,
          fmt("%zu distinct states in 64 steps, period %zu (oracle %zu), %zu decode errors",
              distinct.size(), lut.period(), walk, bad)};
}

Verdict c8_calibration() {
  auto cfg = default_config();
  cfg.variation.comparator_offset_sigma_lsb = 1.0;
  const auto lut = default_lut();
  const AnalogSample known = known_input_for_count(cfg.calibration_known_count);
  std::size_t trials_bad = 0, conv_bad = 0, conv_total = 0, interior_bad = 0;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    RandomStream rng(cfg.variation.rng_seed, t);
    bool trial_bad = false;
    for (EwiseOp op : {EwiseOp::Add, EwiseOp::Mul}) {
      const double off = std::round(rng.normal(0.0, cfg.variation.comparator_offset_sigma_lsb));
      WordPipeline word(op, ComparatorModel{off, {}}, lut);
      word.calibrate(known);
      const WordPipeline ideal(op, ComparatorModel{}, lut);
      const DacModel dac;
      for (unsigned a = 0; a < 16; ++a)
        for (unsigned b = 0; b < 16; ++b) {
          const auto va = dac_convert(Nibble(a), dac, nullptr);
          const AnalogSample v = op == EwiseOp::Mul
                                     ? analog_multiply(va, Nibble(b))
                                     : analog_add(va, dac_convert(Nibble(b), dac, nullptr));
          const unsigned got = word.convert(v).count, want = ideal.convert(v).count;
          ++conv_total;
          if (got != want) {
            ++conv_bad;
            trial_bad = true;
            // Inputs whose shifted crossing stays inside 0..63 must never miss.
            if (want + off >= 0 && want + off <= 63) ++interior_bad;
          }
        }
    }
    trials_bad += trial_bad;
  }
  return {conv_bad == 0,
          fmt("sigma 1 LSB, 1000 trials x 512 conversions: %zu of %zu conversions differ in "
              "%zu trials; %zu of them have an unsaturated crossing",
              conv_bad, conv_total, trials_bad, interior_bad)};
}

Verdict c9_enob() {
  const WordPipeline ideal(EwiseOp::Add, ComparatorModel{}, default_lut());
  const auto cfg = default_config();
  RandomStream r0(42, 0);
  const auto e0 = estimate_enob(ideal, 0.0, 100, cfg.enob_grid_points_per_lsb, r0);
  RandomStream r1(42, 0);
  const auto e1 = estimate_enob(ideal, ewise_level_sigma(EwiseOp::Add, kEnobFitDacSigmaLsb),
                                100, cfg.enob_grid_points_per_lsb, r1);
  const double refit =
      fit_enob_sigma(kPublishedEnobBits, 42, 100, cfg.enob_grid_points_per_lsb, *default_lut());
  const bool ok = e0.enob_bits >= 5.9 && e0.enob_bits <= 6.0 &&
                  std::fabs(e1.enob_bits - kPublishedEnobBits) <= kEnobTargetTol &&
                  e1.conversions >= kEnobMinConversions &&
                  std::fabs(refit - kEnobFitDacSigmaLsb) < 1e-3;
  return {ok, fmt("noiseless %.4f bits [5.9, 6.0]; dac sigma %.4f LSB -> %.4f bits "
                  "(4.78 +/- %.2f) over %llu conversions; refit sigma %.4f",
                  e0.enob_bits, kEnobFitDacSigmaLsb, e1.enob_bits, kEnobTargetTol,
                  static_cast<unsigned long long>(e1.conversions), refit)};
}

Verdict c10_mac() {
  const auto lut = build_lut(default_config().lfsr_taps);
  RandomStream rng(10, 0);
  std::size_t bad_sum = 0, bad_q = 0;
  for (int j = 0; j < 200; ++j) {
    const auto rows = random_rows(8, rng);
    std::vector<unsigned> act(8);
    for (auto& v : act) v = static_cast<unsigned>(rng.uniform_int(0, 1));
    const auto res = run_mac(MacJob{MatrixTile(rows, Layer::A_SRAM), act}, default_config(),
                             lut, rng);
    for (std::size_t c = 0; c < 8; ++c) {
      const auto sum = oracle::dot(act, rows, c);
      bad_sum += res.column_sums[c] != sum;
      bad_q += res.counts[c] != oracle::mac_count(sum, res.full_scale);
    }
  }
  return {bad_sum == 0 && bad_q == 0,
          fmt("200 jobs x 8 columns: %zu sum mismatches, %zu quantization mismatches (exact)",
              bad_sum, bad_q)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria = {
      {"transpose correctness", c1_transpose_property},
      {"transpose cycles/latency/energy/throughput", c2_transpose_numbers},
      {"worked 4x4 swap traces", c3_worked_example},
      {"element-wise add exactness", c4_add_exact},
      {"element-wise mul oracle equivalence", c5_mul_oracle},
      {"element-wise latency/throughput", c6_ewise_numbers},
      {"LFSR soundness", c7_lfsr},
      {"offset calibration", c8_calibration},
      {"ENOB", c9_enob},
      {"MAC correctness", c10_mac},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[++i]);
  }
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i + 1) != only) continue;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    failures += !v.pass;
    std::printf("%s %2zu %s: %s\n", v.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                v.detail.c_str());
  }
  return failures;
}
