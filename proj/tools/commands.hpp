#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <gem3d/config.hpp>

namespace gem3d::cli {

/// Flags shared by every subcommand, after merging onto the config file.
struct Common {
  TileConfig config;
  std::uint64_t seed = 0;
  std::filesystem::path out = "out";
  std::uint64_t trials = 1;
  unsigned threads = 0;
};

struct Inputs {
  std::optional<std::filesystem::path> in, a, b, act, job;
  std::optional<std::size_t> n;
  bool pad = false;
};

int run_transpose(const Common& c, const Inputs& in);
int run_ewise(const Common& c, const Inputs& in, bool mul);
int run_mac(const Common& c, const Inputs& in);
int run_mc_sweep(const Common& c);
int run_lut_dump(const Common& c, bool to_stdout);

}  // namespace gem3d::cli
