#include <doctest.h>

#include <gem3d/arrays.hpp>
#include <gem3d/errors.hpp>
#include <gem3d/rng.hpp>

using namespace gem3d;

namespace {

MatrixTile tile_of(const std::vector<std::vector<unsigned>>& rows, Layer layer) {
  return MatrixTile(rows, layer);
}

MatrixTile random_tile(std::size_t n, RandomStream& rng, Layer layer) {
  std::vector<std::vector<unsigned>> rows(n, std::vector<unsigned>(n));
  for (auto& r : rows)
    for (auto& v : r) v = static_cast<unsigned>(rng.uniform_int(0, 15));
  return MatrixTile(rows, layer);
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const SimError& e) {
    return e.kind();
  }
  FAIL("expected SimError");
  return ErrorKind::Argument;
}

// Worked 4x4 operands: a12=8, a14=12, a21=5, a41=3 (one-based names).
const std::vector<std::vector<unsigned>> kFig6 = {
    {0, 8, 0, 12}, {5, 0, 0, 0}, {0, 0, 0, 0}, {3, 0, 0, 0}};

}  // namespace

TEST_CASE("parallel_read returns stored values without mutation") {
  TSramArray a(tile_of(kFig6, Layer::A_SRAM));
  const std::vector<Coord> cells = {{1, 0}, {3, 0}};
  const auto before = a.tile();
  const auto r1 = parallel_read(a, cells);
  CHECK(r1.at({1, 0}).value() == 5);
  CHECK(r1.at({3, 0}).value() == 3);
  CHECK(parallel_read(a, cells) == r1);
  CHECK(a.tile() == before);
}

TEST_CASE("parallel_read of an upper triangle") {
  TSramArray a(tile_of({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}, Layer::A_SRAM));
  const std::vector<Coord> cells = {{0, 1}, {0, 2}, {1, 2}};
  const auto r = parallel_read(a, cells);
  CHECK(r.at({0, 1}).value() == 2);
  CHECK(r.at({0, 2}).value() == 3);
  CHECK(r.at({1, 2}).value() == 6);
}

TEST_CASE("two readers on one conducting line contend") {
  TSramArray a(tile_of({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}, Layer::A_SRAM));
  a.set_all_blockers(true, true);
  const std::vector<Coord> cells = {{0, 0}, {0, 1}};
  CHECK(kind_of([&] { parallel_read(a, cells); }) == ErrorKind::Contention);
}

TEST_CASE("parallel_write touches exactly the assigned cells") {
  TSramArray a(tile_of(kFig6, Layer::A_SRAM));
  a.set_blocker2({0, 1}, true);
  a.set_blocker2({0, 3}, true);
  const auto before = a.tile();
  parallel_write(a, {{{0, 1}, Nibble(5)}, {{0, 3}, Nibble(3)}});
  CHECK(a.tile().at(0, 1).value() == 5);
  CHECK(a.tile().at(0, 3).value() == 3);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c)
      if (!(r == 0 && (c == 1 || c == 3))) CHECK(a.tile().at(r, c) == before.at(r, c));
}

TEST_CASE("parallel_write edge cases") {
  TSramArray a(tile_of(kFig6, Layer::A_SRAM));
  const auto before = a.tile();
  parallel_write(a, {});
  CHECK(a.tile() == before);
  CHECK(kind_of([&] { parallel_write(a, {{{0, 1}, Nibble(1)}}); }) == ErrorKind::Unreachable);
  CHECK(kind_of([&] { parallel_write(a, {{{2, 2}, Nibble(1)}}); }) == ErrorKind::Unreachable);
}

TEST_CASE("non-disturb: every legal single-row write on small arrays") {
  RandomStream rng(3, 0);
  for (std::size_t n = 2; n <= 8; ++n) {
    for (std::size_t row = 0; row < n; ++row) {
      TSramArray a(random_tile(n, rng, Layer::A_SRAM));
      std::map<Coord, Nibble> assign;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == row || !rng.bernoulli()) continue;
        assign.emplace(Coord{row, c}, Nibble(static_cast<unsigned>(rng.uniform_int(0, 15))));
        a.set_blocker2({row, c}, true);
      }
      const auto before = a.tile();
      parallel_write(a, assign);
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c) {
          const auto it = assign.find({r, c});
          CHECK(a.tile().at(r, c) == (it == assign.end() ? before.at(r, c) : it->second));
        }
    }
  }
}

TEST_CASE("layer A swap step copies the lower column up") {
  TSramArray a(tile_of(kFig6, Layer::A_SRAM));
  CHECK(intra_column_swap_step(a, 0, SwapDirection::LowerToUpper) == 3);
  CHECK(a.tile().at(0, 1).value() == 5);
  CHECK(a.tile().at(0, 3).value() == 3);
  CHECK(a.tile().at(0, 2).value() == 0);
  CHECK(a.tile().at(1, 0).value() == 5);  // sources unchanged
  CHECK(a.tile().at(3, 0).value() == 3);
}

TEST_CASE("layer B swap step copies the upper row down") {
  TEdramArray b(tile_of({{0, 6, 0, 12}, {11, 0, 0, 0}, {0, 0, 0, 0}, {3, 0, 0, 0}},
                        Layer::B_EDRAM));
  intra_column_swap_step(b, 0, SwapDirection::UpperToLower);
  CHECK(b.tile().at(1, 0).value() == 6);
  CHECK(b.tile().at(3, 0).value() == 12);
}

TEST_CASE("last swap step on 3x3 makes a single copy") {
  TSramArray a(tile_of({{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}, Layer::A_SRAM));
  CHECK(intra_column_swap_step(a, 1, SwapDirection::LowerToUpper) == 1);
  CHECK(a.tile().at(1, 2).value() == 8);
  CHECK(kind_of([&] { intra_column_swap_step(a, 2, SwapDirection::LowerToUpper); }) ==
        ErrorKind::Range);
}

TEST_CASE("swap step touches exactly n-1-k cells") {
  RandomStream rng(5, 0);
  for (std::size_t n = 2; n <= 8; ++n) {
    for (std::size_t k = 0; k + 1 < n; ++k) {
      for (auto dir : {SwapDirection::LowerToUpper, SwapDirection::UpperToLower}) {
        TSramArray a(random_tile(n, rng, Layer::A_SRAM));
        const auto before = a.tile();
        intra_column_swap_step(a, k, dir);
        std::size_t touched = 0;
        for (std::size_t r = 0; r < n; ++r)
          for (std::size_t c = 0; c < n; ++c) touched += a.write_counts()(r, c);
        CHECK(touched == n - 1 - k);
        for (std::size_t i = k + 1; i < n; ++i) {
          if (dir == SwapDirection::LowerToUpper)
            CHECK(a.tile().at(k, i) == before.at(i, k));
          else
            CHECK(a.tile().at(i, k) == before.at(k, i));
        }
      }
    }
  }
}

TEST_CASE("inter-layer transfer and its reverse restore the source") {
  RandomStream rng(9, 0);
  TSramArray a(random_tile(5, rng, Layer::A_SRAM));
  TEdramArray b(MatrixTile(5, Layer::B_EDRAM));
  const auto via = Via3dMap::upper_diagonal(5);
  CHECK(inter_layer_transfer(a, b, via) == 10);
  for (const auto& [s, d] : via.pairs) CHECK(b.tile()[d] == a.tile()[s]);

  const auto original = a.tile();
  TSramArray cleared(MatrixTile(5, Layer::A_SRAM));
  CHECK(inter_layer_transfer(b, cleared, via) == 10);
  for (const auto& [s, _] : via.pairs) CHECK(cleared.tile()[s] == original[s]);
}

TEST_CASE("inter-layer transfer counts and validation") {
  TSramArray a(MatrixTile(32, Layer::A_SRAM));
  TEdramArray b(MatrixTile(32, Layer::B_EDRAM));
  CHECK(inter_layer_transfer(b, a, Via3dMap::lower_diagonal(32)) == 496);
  CHECK(inter_layer_transfer(a, b, Via3dMap{}) == 0);

  TSramArray s(MatrixTile(3, Layer::A_SRAM));
  TEdramArray d(MatrixTile(3, Layer::B_EDRAM));
  Via3dMap dup{{{{0, 1}, {0, 1}}, {{0, 2}, {0, 1}}}};
  CHECK(kind_of([&] { inter_layer_transfer(s, d, dup); }) == ErrorKind::ViaMap);
  Via3dMap out{{{{0, 1}, {0, 3}}}};
  CHECK(kind_of([&] { inter_layer_transfer(s, d, out); }) == ErrorKind::ViaMap);
}

TEST_CASE("eDRAM retention and refresh") {
  TEdramArray b(MatrixTile(3, Layer::B_EDRAM), 100);
  b.tick(5);
  refresh(b);
  for (auto c : b.retention_counters()) CHECK(c == 0);

  b.tick(101);
  CHECK(kind_of([&] { b.check_retention(); }) == ErrorKind::Retention);
  CHECK(kind_of([&] { refresh(b); }) == ErrorKind::Retention);

  TEdramArray fresh(MatrixTile(3, Layer::B_EDRAM));
  fresh.tick(33);
  fresh.check_retention();
  CHECK(fresh.retention_limit() == 10000);
}
