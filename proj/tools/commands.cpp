#include "commands.hpp"

#include <algorithm>
#include <thread>

#include <fmt/format.h>

#include <gem3d/compute.hpp>
#include <gem3d/errors.hpp>
#include <gem3d/matrix_io.hpp>
#include <gem3d/metrics.hpp>
#include <gem3d/report.hpp>
#include <gem3d/transpose.hpp>

namespace gem3d::cli {

namespace {

namespace fs = std::filesystem;

/// Collects files for one run directory and the summary that lists them.
class OutputDir {
 public:
  OutputDir(const Common& c, std::string command) : dir_(c.out) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) throw SimError(ErrorKind::Io, fmt::format("cannot create {}: {}", dir_.string(),
                                                      ec.message()));
    summary_.command = std::move(command);
    summary_.seed = c.seed;
    summary_.config_hash = config_hash(c.config);
    provenance_ = provenance_line(c.seed, summary_.config_hash);
    write("config.effective.json", to_json(c.config) + "\n");
  }

  const std::string& provenance() const { return provenance_; }
  RunSummary& summary() { return summary_; }

  void write(const std::string& name, std::string_view contents) {
    write_text_file(dir_ / name, contents);
    summary_.outputs.push_back(name);
  }

  void finish() {
    summary_.outputs.push_back("summary.json");
    write_text_file(dir_ / "summary.json", summary_json(summary_));
  }

 private:
  fs::path dir_;
  RunSummary summary_;
  std::string provenance_;
};

const fs::path& need(const std::optional<fs::path>& p, const char* flag) {
  if (!p) throw SimError(ErrorKind::Argument, fmt::format("missing required input {}", flag));
  return *p;
}

template <typename T>
std::vector<std::vector<std::uint64_t>> grid_rows(const Grid<T>& g) {
  std::vector<std::vector<std::uint64_t>> rows(g.n(), std::vector<std::uint64_t>(g.n()));
  for (std::size_t r = 0; r < g.n(); ++r)
    for (std::size_t c = 0; c < g.n(); ++c) rows[r][c] = g(r, c);
  return rows;
}

MatrixTile load_operand(const fs::path& path, std::optional<std::size_t> n, bool pad) {
  if (!pad) return load_matrix(path, n);
  const auto raw = parse_integer_rows(read_text_file(path));
  if (raw.empty()) throw SimError(ErrorKind::Shape, "empty matrix");
  std::vector<std::vector<unsigned>> rows;
  for (const auto& r : raw) {
    if (r.size() != raw.front().size()) {
      throw SimError(ErrorKind::Shape, "rows have different lengths");
    }
    std::vector<unsigned> row;
    for (auto v : r) {
      if (v > 15) throw SimError(ErrorKind::Range, fmt::format("element {} exceeds 15", v));
      row.push_back(static_cast<unsigned>(v));
    }
    rows.push_back(std::move(row));
  }
  rows = pad_to_square(std::move(rows));
  if (rows.size() < MatrixTile::kMinN) rows = pad_to_square({{rows[0][0], 0}});
  MatrixTile t(rows, Layer::A_SRAM);
  if (n && t.n() != *n) {
    throw SimError(ErrorKind::Shape, fmt::format("padded matrix is {0}x{0}, expected {1}x{1}",
                                                 t.n(), *n));
  }
  return t;
}

void add_energy(OutputDir& out, const CostLedger& ledger) {
  out.summary().energy = energy_rollup(ledger);
  out.write("energy.csv", energy_csv(out.summary().energy, out.provenance()));
  out.write("ledger.csv", ledger_csv(ledger, out.provenance()));
  out.write("phases.csv", phases_csv(ledger, out.provenance()));
  for (const auto& [flag, count] : ledger.flags()) out.summary().counters[flag] = count;
}

void add_throughput(OutputDir& out, std::string op, std::size_t n, std::uint64_t ops,
                    const CostLedger& ledger) {
  const auto t = throughput(ops, ledger.total_latency_s(), ledger.total_energy_j());
  out.summary().throughput.push_back({std::move(op), n, t});
  out.write("throughput.csv", throughput_csv(out.summary().throughput, out.provenance()));
  fmt::print("latency {} ns, energy {} nJ, {} GOPS, {} GOPS/W\n", sig4(t.latency_s * 1e9),
             sig4(t.energy_j * 1e9), sig4(t.gops), sig4(t.gops_per_w));
}

}  // namespace

int run_transpose(const Common& c, const Inputs& in) {
  const MatrixTile tile = load_operand(need(in.in, "--in"), in.n, in.pad);
  const auto schedule = compile_transpose(tile.n());
  const auto run = execute_transpose(
      TSramArray(tile),
      TEdramArray(MatrixTile(tile.n(), Layer::B_EDRAM), c.config.edram_retention_limit_cycles),
      schedule, c.config);

  OutputDir out(c, "transpose");
  out.write("result.mat", format_matrix(run.layer_a.tile(), out.provenance()));
  out.write("layer_b.mat", format_matrix(run.layer_b.tile(), out.provenance()));
  out.write("schedule.txt", dump_schedule(schedule));
  add_energy(out, run.ledger);
  out.summary().values["cycles"] = static_cast<double>(run.ledger.total_cycles());
  add_throughput(out, "transpose", tile.n(), transpose_ops(tile.n()), run.ledger);
  out.finish();
  return 0;
}

int run_ewise(const Common& c, const Inputs& in, bool mul) {
  const MatrixTile a = load_operand(need(in.a, "--a"), in.n, false);
  const MatrixTile b = load_operand(need(in.b, "--b"), a.n(), false);
  const EwiseOp op = mul ? EwiseOp::Mul : EwiseOp::Add;
  const std::size_t n = a.n();
  auto lut = std::make_shared<const LfsrLut>(build_lut(c.config.lfsr_taps));

  std::optional<EwiseResult> first;
  Grid<double> sum(n, 0.0), sum_sq(n, 0.0);
  std::uint64_t mismatches = 0;
  for (std::uint64_t t = 0; t < c.trials; ++t) {
    RandomStream rng(c.seed, t);
    auto bank = PipelineBank::create(op, n, c.config, lut, rng);
    bank.calibrate_all(c.config.calibration_known_count);
    auto res = run_ewise(EwiseJob{op, a, b}, bank, c.config, rng);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t col = 0; col < n; ++col) {
        const double v = res.values(r, col);
        sum(r, col) += v;
        sum_sq(r, col) += v * v;
        const double ideal = ideal_output(op, a.at(r, col).value(), b.at(r, col).value());
        if (v != ideal) ++mismatches;
      }
    if (!first) first = std::move(res);
  }

  OutputDir out(c, mul ? "ewise-mul" : "ewise-add");
  out.write("result.mat", format_rows(grid_rows(first->values), out.provenance()));
  out.write("counts.mat", format_rows(grid_rows(first->counts), out.provenance()));
  out.write("codes.mat", format_rows(grid_rows(first->codes), out.provenance()));
  if (c.trials > 1) {
    std::string csv = out.provenance() + "\nrow,col,mean,std\n";
    const double k = static_cast<double>(c.trials);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t col = 0; col < n; ++col) {
        const double m = sum(r, col) / k;
        const double var = std::max(0.0, sum_sq(r, col) / k - m * m);
        csv += fmt::format("{},{},{},{}\n", r, col, m, std::sqrt(var));
      }
    out.write("trial_stats.csv", csv);
  }
  add_energy(out, first->ledger);
  out.summary().counters["trials"] = c.trials;
  out.summary().counters["mismatches_vs_ideal"] = mismatches;
  add_throughput(out, mul ? "mul" : "add", n, ewise_ops(n), first->ledger);
  out.finish();
  return 0;
}

int run_mac(const Common& c, const Inputs& in) {
  const MatrixTile w = load_operand(need(in.in, "--in"), in.n, false);
  const auto act_rows = parse_integer_rows(read_text_file(need(in.act, "--act")));
  std::vector<unsigned> act;
  for (const auto& row : act_rows)
    for (auto v : row) {
      if (v > 1) throw SimError(ErrorKind::Argument, fmt::format("activation {} is not 0/1", v));
      act.push_back(static_cast<unsigned>(v));
    }
  const auto lut = build_lut(c.config.lfsr_taps);
  RandomStream rng(c.seed, 0);
  const auto res = gem3d::run_mac(MacJob{w, act}, c.config, lut, rng);

  OutputDir out(c, "mac");
  std::string csv = out.provenance() + "\ncol,sum,full_scale,count,code\n";
  for (std::size_t col = 0; col < w.n(); ++col) {
    csv += fmt::format("{},{},{},{},{}\n", col, res.column_sums[col], res.full_scale,
                       res.counts[col], format_bits(res.codes[col]));
  }
  out.write("columns.csv", csv);
  add_energy(out, res.ledger);
  out.finish();
  return 0;
}

int run_mc_sweep(const Common& c) {
  auto lut = std::make_shared<const LfsrLut>(build_lut(c.config.lfsr_taps));
  const std::size_t trials = c.trials;
  std::vector<std::optional<McTrialResult>> results(trials);
  std::vector<std::exception_ptr> errors(trials);

  unsigned workers = c.threads ? c.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, trials));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t t = w; t < trials; t += workers) {
        try {
          results[t] = run_mc_trial(c.config, lut, c.seed, t);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Merge in stream order so the floating-point sums are thread-independent.
  LinearityAccumulator add, mul;
  std::uint64_t mismatches = 0;
  std::string offsets = "trial,add_offset,mul_offset,calibration_mismatches\n";
  for (const auto& r : results) {
    add.merge(r->add);
    mul.merge(r->mul);
    mismatches += r->calibration_mismatches;
    offsets += fmt::format("{},{},{},{}\n", r->trial, r->add_offset, r->mul_offset,
                           r->calibration_mismatches);
  }

  const WordPipeline ideal(EwiseOp::Add, ComparatorModel{}, lut);
  RandomStream enob_rng(c.seed, trials);
  const auto enob = estimate_enob(
      ideal, ewise_level_sigma(EwiseOp::Add, c.config.variation.dac_sigma_lsb),
      std::max<std::size_t>(100, trials), c.config.enob_grid_points_per_lsb, enob_rng);

  OutputDir out(c, "mc-sweep");
  out.summary().linearity["add"] = add.rows();
  out.summary().linearity["mul"] = mul.rows();
  out.write("linearity_add.csv", linearity_csv(add.rows(), out.provenance()));
  out.write("linearity_mul.csv", linearity_csv(mul.rows(), out.provenance()));
  out.write("offsets.csv", out.provenance() + "\n" + offsets);
  out.summary().counters["trials"] = trials;
  out.summary().counters["calibration_mismatches"] = mismatches;
  out.summary().counters["enob_conversions"] = enob.conversions;
  out.summary().values["enob_bits"] = enob.enob_bits;
  out.summary().values["enob_rms_error_lsb"] = enob.rms_error_lsb;
  out.summary().notes["enob_method"] = enob.method;
  out.finish();
  fmt::print("{} trials, calibration mismatches {}, ENOB {} bits\n", trials, mismatches,
             sig4(enob.enob_bits));
  return 0;
}

int run_lut_dump(const Common& c, bool to_stdout) {
  const auto lut = build_lut(c.config.lfsr_taps);
  const std::string dump = dump_lut(lut);
  if (to_stdout) {
    fmt::print("{}", dump);
    return 0;
  }
  OutputDir out(c, "lut-dump");
  out.write("lut.txt", dump);
  out.summary().counters["period"] = lut.period();
  out.finish();
  return 0;
}

}  // namespace gem3d::cli
