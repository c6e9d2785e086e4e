#include <doctest.h>

#include <set>

#include <gem3d/errors.hpp>
#include <gem3d/lfsr.hpp>
#include <gem3d/word_pipeline.hpp>

#include "oracles.hpp"

using namespace gem3d;

namespace {

const std::vector<unsigned> kTaps(kDefaultTaps.begin(), kDefaultTaps.end());

AnalogSample level(double v) {
  AnalogSample s;
  s.level = v;
  return s;
}

}  // namespace

TEST_CASE("step matches the bitwise register") {
  oracle::Lfsr ref(kTaps);
  LfsrState s{kLfsrSeed, kTaps};
  for (int i = 0; i < 300; ++i) {
    REQUIRE(s.bits == ref.value());
    s = lfsr_step(s);
    ref.step();
  }
}

TEST_CASE("lockup state is rejected") {
  CHECK_THROWS_AS(lfsr_step(LfsrState{0, kTaps}), SimError);
}

TEST_CASE("default taps give 64 distinct states and a full cycle") {
  std::set<Byte> seen;
  LfsrState s{kLfsrSeed, kTaps};
  for (int i = 0; i < 64; ++i) {
    seen.insert(s.bits);
    s = lfsr_step(s);
  }
  CHECK(seen.size() == 64);
  CHECK(oracle::walk_length(kTaps) == 255);
  const auto lut = build_lut(kTaps);
  CHECK(lut.period() == 255);
  CHECK(lut.pure_cycle());
}

TEST_CASE("Q7 xor Q1 feedback into Q8 is a short cycle in both shift orders") {
  // Shift toward Q1 (the implemented form).
  CHECK(oracle::walk_length({7, 1}) == 30);
  // Shift toward Q8 for Q2..Q7 with Q1 <- Q8 and Q8 <- Q7 ^ Q1.
  auto up = [](unsigned s) {
    auto q = [&](unsigned k) { return (s >> (k - 1)) & 1u; };
    unsigned next = ((s << 1) & 0x7eu) | q(8);
    return next | ((q(7) ^ q(1)) << 7);
  };
  std::set<unsigned> seen;
  for (unsigned s = 1; !seen.contains(s); s = up(s)) seen.insert(s);
  CHECK(seen.size() == 30);

  try {
    build_lut(std::vector<unsigned>(kQ7Q1Taps.begin(), kQ7Q1Taps.end()));
    FAIL("expected short cycle");
  } catch (const SimError& e) {
    CHECK(e.kind() == ErrorKind::ShortCycle);
    CHECK(std::string(e.what()).find("{7,1}") != std::string::npos);
  }
}

TEST_CASE("LUT is a bijection anchored at the seed") {
  const auto lut = build_lut(kTaps);
  CHECK(lut.encode(0) == kLfsrSeed);
  CHECK(*lut.decode(kLfsrSeed) == 0);
  std::set<Byte> codes;
  for (unsigned k = 0; k < 64; ++k) {
    CHECK(*lut.decode(lut.encode(k)) == k);
    codes.insert(lut.encode(k));
  }
  CHECK(codes.size() == 64);
  CHECK_FALSE(lut.decode(lut.state_at(64)).has_value());
}

TEST_CASE("count_pulses is the identity on counts") {
  const auto lut = build_lut(kTaps);
  CHECK(count_pulses(0, lut).code == kLfsrSeed);
  CHECK(count_pulses(63, lut).count == 63);
  CHECK(count_pulses(63, lut).code == lut.encode(63));
  for (unsigned k = 0; k < 64; ++k) {
    oracle::Lfsr ref(kTaps);
    for (unsigned i = 0; i < k; ++i) ref.step();
    const auto pc = count_pulses(k, lut);
    CHECK(pc.count == k);
    CHECK(pc.code == ref.value());
  }
  CHECK_THROWS(count_pulses(64, lut));
}

TEST_CASE("LUT dump golden prefix") {
  const auto dump = dump_lut(build_lut(kTaps));
  CHECK(dump.rfind("00000001 0\n10000000 1\n01000000 2\n", 0) == 0);
  CHECK(std::count(dump.begin(), dump.end(), '\n') == 64);
}

TEST_CASE("calibration recovers an injected offset") {
  auto lut = std::make_shared<const LfsrLut>(build_lut(kTaps));
  WordPipeline zero(EwiseOp::Add, ComparatorModel{}, lut);
  CHECK(zero.calibrate(known_input_for_count(32)).offset_counts == 0);

  WordPipeline w(EwiseOp::Add, ComparatorModel{2.0, {}}, lut);
  const auto rec = w.calibrate(known_input_for_count(32));
  CHECK(rec.known_input_count == 32);
  CHECK(rec.measured_count == 34);
  CHECK(rec.offset_counts == 2);
  CHECK(w.calibrate(known_input_for_count(32)).offset_counts == 2);  // idempotent
  for (unsigned k = 0; k <= 61; ++k) {
    CHECK(w.convert(level(k / 63.0)).count == k);
  }
  CHECK(w.initial_state() == lut->state_at(-2));
}

TEST_CASE("saturated calibration is refused") {
  auto lut = std::make_shared<const LfsrLut>(build_lut(kTaps));
  WordPipeline w(EwiseOp::Mul, ComparatorModel{40.0, {}}, lut);
  CHECK_THROWS_AS(w.calibrate(known_input_for_count(32)), SimError);
  CHECK_FALSE(w.calibrated());
}

TEST_CASE("edge inputs saturate under a static offset") {
  // The conversion window holds 64 ramp crossings. With a +2 offset the top
  // two counts clip before the counter preset can undo them.
  auto lut = std::make_shared<const LfsrLut>(build_lut(kTaps));
  WordPipeline w(EwiseOp::Add, ComparatorModel{2.0, {}}, lut);
  w.calibrate(known_input_for_count(32));
  CHECK(w.convert(level(1.0)).count == 61);
  WordPipeline neg(EwiseOp::Add, ComparatorModel{-2.0, {}}, lut);
  neg.calibrate(known_input_for_count(32));
  CHECK(neg.convert(level(0.0)).count == 2);
}
