#include "gem3d/arrays.hpp"

#include <numeric>
#include <set>
#include <string>

#include <fmt/format.h>

#include "gem3d/errors.hpp"

namespace gem3d {

namespace {

std::string cell_str(Coord c) { return fmt::format("({},{})", c.row, c.col); }

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t size) : parent_(size) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

struct Driver {
  std::string who;
  Nibble value;
};

void check_cell(const TransposeArray& array, Coord c) {
  if (c.row >= array.n() || c.col >= array.n()) {
    throw SimError(ErrorKind::Range,
                   "cell " + cell_str(c) + " outside " + std::to_string(array.n()) + "x" +
                       std::to_string(array.n()) + " array");
  }
}

}  // namespace

// ---------------------------------------------------------------------------

TransposeArray::TransposeArray(MatrixTile tile, WordlineOrientation orientation)
    : tile_(std::move(tile)),
      orientation_(orientation),
      blocker1_(tile_.n(), 0),
      blocker2_(tile_.n(), 0),
      rwl_(tile_.n(), false),
      wwl_(tile_.n(), false),
      write_counts_(tile_.n(), 0u) {}

void TransposeArray::set_blocker1(Coord segment, bool on) {
  check_cell(*this, segment);
  blocker1_[segment] = on ? 1 : 0;
}

void TransposeArray::set_blocker2(Coord destination, bool on) {
  check_cell(*this, destination);
  blocker2_[destination] = on ? 1 : 0;
}

void TransposeArray::set_all_blockers(bool blocker1_on, bool blocker2_on) {
  for (auto& b : blocker1_) b = blocker1_on ? 1 : 0;
  for (auto& b : blocker2_) b = blocker2_on ? 1 : 0;
}

TransposeArray::CycleOutcome TransposeArray::evaluate(const CycleDrive& drive) const {
  const std::size_t n = this->n();
  const std::size_t nn = n * n;
  const auto r_node = [n](std::size_t r, std::size_t c) { return r * n + c; };
  const auto w_node = [n, nn](std::size_t r, std::size_t c) { return nn + r * n + c; };
  const auto line_on = [](const std::vector<bool>& lines, std::size_t i) {
    return i < lines.size() && lines[i];
  };

  DisjointSets nets(2 * nn);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c + 1 < n; ++c) {
      if (blocker1_(r, c)) {
        nets.unite(r_node(r, c), r_node(r, c + 1));
        nets.unite(w_node(r, c), w_node(r, c + 1));
      }
    }
    for (std::size_t c = 0; c < n; ++c) {
      if (r != c && blocker2_(r, c)) nets.unite(w_node(r, c), r_node(c, r));
    }
  }

  CycleOutcome out;
  std::map<std::size_t, Driver> drivers;
  const auto add_driver = [&](std::size_t node, Driver d) {
    const std::size_t root = nets.find(node);
    auto [it, inserted] = drivers.emplace(root, d);
    if (!inserted) {
      throw SimError(ErrorKind::Contention,
                     "bus contention: " + it->second.who + " and " + d.who +
                         " drive the same line segment");
    }
  };

  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const Coord cell{r, c};
      if (!line_on(drive.rwl, rwl_line(cell))) continue;
      out.reads.emplace(cell, tile_[cell]);
      add_driver(r_node(r, c), Driver{"cell " + cell_str(cell), tile_[cell]});
    }
  }
  for (const auto& [seg, value] : drive.r_segment_injections) {
    check_cell(*this, seg);
    add_driver(r_node(seg.row, seg.col), Driver{"driver at " + cell_str(seg), value});
  }

  for (const auto& [cell, _] : drive.bond_writes) {
    check_cell(*this, cell);
    if (!line_on(drive.wwl, wwl_line(cell))) {
      throw SimError(ErrorKind::Unreachable,
                     "3D bond targets " + cell_str(cell) + " but its WWL is not asserted");
    }
  }

  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      const Coord cell{r, c};
      if (!line_on(drive.wwl, wwl_line(cell))) continue;
      const auto net = drivers.find(nets.find(w_node(r, c)));
      const auto bond = drive.bond_writes.find(cell);
      if (bond != drive.bond_writes.end()) {
        if (net != drivers.end()) {
          throw SimError(ErrorKind::Contention, "W node of " + cell_str(cell) +
                                                    " driven by 3D bond and by " +
                                                    net->second.who);
        }
        out.writes.emplace(cell, bond->second);
      } else if (net != drivers.end()) {
        out.writes.emplace(cell, net->second.value);
      }
    }
  }
  return out;
}

void TransposeArray::commit(const CycleDrive& drive, const std::map<Coord, Nibble>& writes) {
  rwl_.assign(n(), false);
  wwl_.assign(n(), false);
  for (std::size_t i = 0; i < n(); ++i) {
    rwl_[i] = i < drive.rwl.size() && drive.rwl[i];
    wwl_[i] = i < drive.wwl.size() && drive.wwl[i];
  }
  for (const auto& [cell, value] : writes) {
    tile_.set(cell, value);
    ++write_counts_[cell];
    on_written(cell);
  }
}

TSramArray::TSramArray(MatrixTile tile)
    : TransposeArray((tile.set_layer(Layer::A_SRAM), std::move(tile)),
                     WordlineOrientation::ReadByColumn) {}

TEdramArray::TEdramArray(MatrixTile tile, std::uint64_t retention_limit_cycles)
    : TransposeArray((tile.set_layer(Layer::B_EDRAM), std::move(tile)),
                     WordlineOrientation::ReadByRow),
      retention_limit_(retention_limit_cycles),
      retention_(this->n(), 0) {}

void TEdramArray::tick(std::uint64_t cycles) {
  for (auto& c : retention_) c += cycles;
}

void TEdramArray::check_retention() const {
  for (std::size_t r = 0; r < n(); ++r) {
    for (std::size_t c = 0; c < n(); ++c) {
      if (retention_(r, c) > retention_limit_) {
        throw SimError(ErrorKind::Retention,
                       fmt::format("word ({},{}) held for {} cycles, retention limit is {}", r,
                                   c, retention_(r, c), retention_limit_));
      }
    }
  }
}

void TEdramArray::on_written(Coord cell) { retention_[cell] = 0; }

void refresh(TEdramArray& array) {
  array.check_retention();
  for (auto& c : array.retention_) c = 0;
}

// ---------------------------------------------------------------------------

void Via3dMap::validate(std::size_t n) const {
  std::set<Coord> sources;
  std::set<Coord> destinations;
  for (const auto& [src, dst] : pairs) {
    if (src.row >= n || src.col >= n || dst.row >= n || dst.col >= n) {
      throw SimError(ErrorKind::ViaMap, "via pair " + cell_str(src) + "->" + cell_str(dst) +
                                            " outside " + std::to_string(n) + "x" +
                                            std::to_string(n) + " array");
    }
    if (!sources.insert(src).second) {
      throw SimError(ErrorKind::ViaMap, "via map uses source " + cell_str(src) + " twice");
    }
    if (!destinations.insert(dst).second) {
      throw SimError(ErrorKind::ViaMap, "via map uses destination " + cell_str(dst) + " twice");
    }
  }
}

Via3dMap Via3dMap::upper_diagonal(std::size_t n) {
  Via3dMap via;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = r + 1; c < n; ++c) via.pairs.emplace_back(Coord{r, c}, Coord{r, c});
  }
  return via;
}

Via3dMap Via3dMap::lower_diagonal(std::size_t n) {
  Via3dMap via;
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t c = 0; c < r; ++c) via.pairs.emplace_back(Coord{r, c}, Coord{r, c});
  }
  return via;
}

std::map<Coord, Nibble> parallel_read(TransposeArray& array, std::span<const Coord> cells) {
  TransposeArray::CycleDrive drive;
  drive.rwl.assign(array.n(), false);
  for (Coord c : cells) {
    check_cell(array, c);
    drive.rwl[array.rwl_line(c)] = true;
  }
  const auto outcome = array.evaluate(drive);
  array.commit(drive, {});
  std::map<Coord, Nibble> values;
  for (Coord c : cells) values.emplace(c, outcome.reads.at(c));
  return values;
}

void parallel_write(TransposeArray& array, const std::map<Coord, Nibble>& assignments) {
  if (assignments.empty()) return;
  TransposeArray::CycleDrive drive;
  drive.wwl.assign(array.n(), false);
  for (const auto& [cell, value] : assignments) {
    check_cell(array, cell);
    if (cell.row == cell.col || !array.blocker2(cell)) {
      throw SimError(ErrorKind::Unreachable,
                     "cell " + cell_str(cell) + " is behind an open (off) blocker path");
    }
    drive.wwl[array.wwl_line(cell)] = true;
    drive.r_segment_injections.emplace(Coord{cell.col, cell.row}, value);
  }

  TransposeArray::CycleOutcome outcome;
  try {
    outcome = array.evaluate(drive);
  } catch (const SimError& e) {
    if (e.kind() != ErrorKind::Contention) throw;
    throw SimError(ErrorKind::Overlap, std::string("overlapping assignments: ") + e.what());
  }
  for (const auto& [cell, _] : outcome.writes) {
    if (!assignments.contains(cell)) {
      throw SimError(ErrorKind::CollateralWrite,
                     "write would disturb non-target cell " + cell_str(cell));
    }
  }
  for (const auto& [cell, value] : assignments) {
    const auto it = outcome.writes.find(cell);
    if (it == outcome.writes.end() || it->second != value) {
      throw SimError(ErrorKind::Unreachable, "cell " + cell_str(cell) + " was not reached");
    }
  }
  array.commit(drive, outcome.writes);
}

std::size_t intra_column_swap_step(TransposeArray& array, std::size_t k,
                                   SwapDirection direction) {
  const std::size_t n = array.n();
  if (k + 1 >= n) {
    throw SimError(ErrorKind::Range, fmt::format("swap index k={} out of range 0..{}", k, n - 2));
  }

  array.set_all_blockers(false, false);
  TransposeArray::CycleDrive drive;
  drive.rwl.assign(n, false);
  drive.wwl.assign(n, false);
  std::map<Coord, Coord> expected;  // destination -> source
  for (std::size_t i = k + 1; i < n; ++i) {
    const Coord lower{i, k};
    const Coord upper{k, i};
    const Coord src = direction == SwapDirection::LowerToUpper ? lower : upper;
    const Coord dst = direction == SwapDirection::LowerToUpper ? upper : lower;
    expected.emplace(dst, src);
    array.set_blocker2(dst, true);
    drive.rwl[array.rwl_line(src)] = true;
    drive.wwl[array.wwl_line(dst)] = true;
  }

  const auto outcome = array.evaluate(drive);
  if (outcome.writes.size() != expected.size()) {
    for (const auto& [cell, _] : outcome.writes) {
      if (!expected.contains(cell)) {
        throw SimError(ErrorKind::CollateralWrite,
                       "swap step would disturb cell " + cell_str(cell));
      }
    }
    throw SimError(ErrorKind::Unreachable, "swap step left a destination unwritten");
  }
  for (const auto& [dst, src] : expected) {
    const auto it = outcome.writes.find(dst);
    if (it == outcome.writes.end() || it->second != array.tile()[src]) {
      throw SimError(ErrorKind::Unreachable, "swap step did not copy " + cell_str(src) +
                                                 " into " + cell_str(dst));
    }
  }
  array.commit(drive, outcome.writes);
  return expected.size();
}

std::size_t inter_layer_transfer(TransposeArray& src, TransposeArray& dst, const Via3dMap& via) {
  if (src.n() != dst.n()) {
    throw SimError(ErrorKind::Shape, "inter-layer transfer between arrays of different size");
  }
  via.validate(src.n());
  src.set_all_blockers(false, false);
  dst.set_all_blockers(false, false);
  if (via.pairs.empty()) {
    src.commit({}, {});
    dst.commit({}, {});
    return 0;
  }

  TransposeArray::CycleDrive read_drive;
  read_drive.rwl.assign(src.n(), false);
  for (const auto& [s, _] : via.pairs) read_drive.rwl[src.rwl_line(s)] = true;
  const auto read = src.evaluate(read_drive);

  TransposeArray::CycleDrive write_drive;
  write_drive.wwl.assign(dst.n(), false);
  for (const auto& [s, d] : via.pairs) {
    write_drive.wwl[dst.wwl_line(d)] = true;
    write_drive.bond_writes.emplace(d, read.reads.at(s));
  }
  const auto written = dst.evaluate(write_drive);
  if (written.writes.size() != via.pairs.size()) {
    throw SimError(ErrorKind::CollateralWrite,
                   "inter-layer transfer would write cells outside the via map");
  }
  src.commit(read_drive, {});
  dst.commit(write_drive, written.writes);
  return via.pairs.size();
}

}  // namespace gem3d
