// gem3d: command-line front end for the tile simulator.
//
// Exit codes: 0 ok, 64 usage, 65 bad input, 70 internal invariant violated.
// Errors are printed as one line: "gem3d: error[<kind>]: <message>".

#include <cstdio>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include <gem3d/compute.hpp>
#include <gem3d/errors.hpp>

#include "commands.hpp"

namespace {

constexpr int kExitUsage = 64;
constexpr int kExitInput = 65;
constexpr int kExitInternal = 70;

int fail(std::string_view kind, std::string_view msg, int code) {
  std::string line(msg);
  for (char& ch : line) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  fmt::print(stderr, "gem3d: error[{}]: {}\n", kind, line);
  return code;
}

std::vector<unsigned> parse_taps(const std::string& text) {
  if (text == "q7q1") return {7, 1};
  std::vector<unsigned> taps;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      taps.push_back(static_cast<unsigned>(v));
    } catch (const std::exception&) {
      throw gem3d::SimError(gem3d::ErrorKind::Argument, "bad --taps entry '" + tok + "'");
    }
  }
  return taps;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace gem3d;
  CLI::App app{"Behavioral simulator of a 3D SRAM/eDRAM compute-in-memory tile"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, taps;
  std::uint64_t seed = 0;
  std::string out = "out";
  std::uint64_t trials = 1;
  unsigned threads = 0;
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed (default: config variation.rng_seed)");
  app.add_option("--config", config_path, "Config file (JSON, comments allowed)");
  auto* out_opt = app.add_option("--out", out, "Output directory");
  auto* trials_opt = app.add_option("--trials", trials, "Monte-Carlo trials")
                         ->check(CLI::PositiveNumber);
  app.add_option("--taps", taps, "LFSR feedback positions, e.g. 1,3,4,5 or q7q1");
  app.add_option("--threads", threads, "Worker threads for mc-sweep (0 = hardware)");

  cli::Inputs in;
  std::string in_path, a_path, b_path, act_path, job_path;
  std::size_t n = 0;

  auto* transpose = app.add_subcommand("transpose", "In-situ matrix transpose");
  transpose->add_option("--in", in_path, "Input matrix")->required();
  auto* n_opt = transpose->add_option("--n", n, "Expected dimension");
  transpose->add_flag("--pad", in.pad, "Zero-pad a rectangular input to square");

  auto add_ewise = [&](const char* name, const char* desc) {
    auto* sub = app.add_subcommand(name, desc);
    sub->add_option("--a", a_path, "Operand A matrix");
    sub->add_option("--b", b_path, "Operand B matrix");
    sub->add_option("--job", job_path, "Job description file");
    sub->add_option("--n", n, "Expected dimension");
    return sub;
  };
  auto* mul = add_ewise("ewise-mul", "Element-wise multiply");
  auto* add = add_ewise("ewise-add", "Element-wise add");

  auto* mac = app.add_subcommand("mac", "Column MAC with binary activations");
  mac->add_option("--in", in_path, "Weight matrix");
  mac->add_option("--act", act_path, "Activation vector (one 0/1 per row)");
  mac->add_option("--job", job_path, "Job description file");
  mac->add_option("--n", n, "Expected dimension");

  auto* sweep = app.add_subcommand("mc-sweep", "Monte-Carlo calibration/linearity/ENOB sweep");
  auto* lut = app.add_subcommand("lut-dump", "Print the 64-entry LFSR decode table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kExitUsage);
  }

  try {
    cli::Common c;
    c.config = config_path.empty() ? default_config() : load_config(config_path);
    if (!taps.empty()) {
      c.config.lfsr_taps = parse_taps(taps);
      validate(c.config);
    }
    c.seed = seed_opt->count() ? seed : c.config.variation.rng_seed;
    c.config.variation.rng_seed = c.seed;
    c.out = out;
    c.trials = trials;
    c.threads = threads;

    if (!in_path.empty()) in.in = in_path;
    if (!a_path.empty()) in.a = a_path;
    if (!b_path.empty()) in.b = b_path;
    if (!act_path.empty()) in.act = act_path;
    if (n_opt->count() || n != 0) in.n = n;

    if (!job_path.empty()) {
      const JobDescription job = load_job(job_path);
      const std::string want = app.got_subcommand(mul) ? "mul" : app.got_subcommand(add) ? "add"
                                                                                       : "mac";
      if (job.op != want) {
        throw SimError(ErrorKind::Argument,
                       fmt::format("job op '{}' does not match subcommand", job.op));
      }
      if (!in.a && job.a) in.a = job.a;
      if (!in.b && job.b) in.b = job.b;
      if (!in.in && job.a && want == "mac") in.in = job.a;
      if (!in.act && job.act) in.act = job.act;
      if (!out_opt->count() && job.out) c.out = *job.out;
      if (!trials_opt->count() && job.trials) c.trials = *job.trials;
      if (!seed_opt->count() && job.seed) {
        c.seed = *job.seed;
        c.config.variation.rng_seed = c.seed;
      }
    }

    if (app.got_subcommand(transpose)) return cli::run_transpose(c, in);
    if (app.got_subcommand(mul)) return cli::run_ewise(c, in, true);
    if (app.got_subcommand(add)) return cli::run_ewise(c, in, false);
    if (app.got_subcommand(mac)) return cli::run_mac(c, in);
    if (app.got_subcommand(sweep)) return cli::run_mc_sweep(c);
    if (app.got_subcommand(lut)) return cli::run_lut_dump(c, !out_opt->count());
    return fail("usage", "no subcommand", kExitUsage);
  } catch (const SimError& e) {
    const ErrorKind k = e.kind();
    const bool input = is_input_error(k) || k == ErrorKind::ShortCycle ||
                       k == ErrorKind::Calibration || k == ErrorKind::Uncalibrated;
    return fail(to_string(k), e.what(), input ? kExitInput : kExitInternal);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), kExitInternal);
  }
}
