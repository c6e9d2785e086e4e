#include <doctest.h>

#include <gem3d/analog.hpp>
#include <gem3d/metrics.hpp>

#include "oracles.hpp"

using namespace gem3d;

namespace {

AnalogSample level(double v) {
  AnalogSample s;
  s.level = v;
  return s;
}

}  // namespace

TEST_CASE("DAC transfer") {
  const DacModel dac;
  CHECK(dac_convert(Nibble(0), dac, nullptr).level == 0.0);
  CHECK(dac_convert(Nibble(15), dac, nullptr).level == 1.0);
  const double l8 = dac_convert(Nibble(8), dac, nullptr).level;
  const double l7 = dac_convert(Nibble(7), dac, nullptr).level;
  CHECK(l8 == doctest::Approx(8.0 / 15));
  CHECK(l7 == doctest::Approx(7.0 / 15));
  CHECK(l8 - l7 == doctest::Approx(1.0 / 15));
  for (unsigned c = 0; c < 15; ++c) {
    CHECK(dac_convert(Nibble(c + 1), dac, nullptr).level >
          dac_convert(Nibble(c), dac, nullptr).level);
  }
}

TEST_CASE("DAC noise is applied once and clamped") {
  DacModel dac;
  dac.noise_sigma_lsb = 3.0;
  RandomStream rng(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const auto s = dac_convert(Nibble(0), dac, &rng);
    CHECK(s.noise_applied);
    CHECK(s.level >= 0.0);
    CHECK(s.level <= 1.0);
  }
}

TEST_CASE("multiplier is bilinear") {
  const DacModel dac;
  CHECK(analog_multiply(level(1.0), Nibble(15)).level == 1.0);
  CHECK(analog_multiply(level(0.7), Nibble(0)).level == 0.0);
  CHECK(analog_multiply(dac_convert(Nibble(4), dac, nullptr), Nibble(3)).level ==
        doctest::Approx(12.0 / 225));
  CHECK(analog_multiply(level(0.5), Nibble(3)).source == AnalogSource::MUL);
}

TEST_CASE("multiplier gain and offset knobs") {
  MultiplierModel m{0.1, 2.0};
  CHECK(analog_multiply(level(0.5), Nibble(15), m).level ==
        doctest::Approx(0.55 + 2.0 / 63));
}

TEST_CASE("adder") {
  const DacModel dac;
  auto d = [&](unsigned c) { return dac_convert(Nibble(c), dac, nullptr); };
  CHECK(analog_add(d(0), d(0)).level == 0.0);
  CHECK(analog_add(d(15), d(15)).level == 1.0);
  CHECK(analog_add(d(7), d(8)).level == doctest::Approx(0.5));
  CHECK(analog_add(d(7), d(8)).source == AnalogSource::ADD);
}

TEST_CASE("delay to pulses") {
  CHECK(delay_to_pulses(level(0.0), {}) == 0);
  CHECK(delay_to_pulses(level(1.0), {}) == 63);
  CHECK(delay_to_pulses(level(0.5), ComparatorModel{1.0, {}}) == 33);
  CHECK(delay_to_pulses(level(0.0), ComparatorModel{-3.0, {}}) == 0);
  CHECK(delay_to_pulses(level(1.0), ComparatorModel{3.0, {}}) == 63);
}

TEST_CASE("monotonicity of the noiseless chain") {
  const DacModel dac;
  for (unsigned a = 0; a <= 15; ++a) {
    for (unsigned b = 0; b < 15; ++b) {
      const auto va = dac_convert(Nibble(a), dac, nullptr);
      CHECK(analog_multiply(va, Nibble(b)).level <= analog_multiply(va, Nibble(b + 1)).level);
      CHECK(analog_add(va, dac_convert(Nibble(b), dac, nullptr)).level <=
            analog_add(va, dac_convert(Nibble(b + 1), dac, nullptr)).level);
    }
  }
  unsigned prev = 0;
  for (int i = 0; i <= 1000; ++i) {
    const unsigned p = delay_to_pulses(level(i / 1000.0), {});
    CHECK(p >= prev);
    prev = p;
  }
}

TEST_CASE("end-to-end pulses match the brute-force quantizers") {
  const DacModel dac;
  for (unsigned a = 0; a <= 15; ++a) {
    for (unsigned b = 0; b <= 15; ++b) {
      const auto va = dac_convert(Nibble(a), dac, nullptr);
      const auto vb = dac_convert(Nibble(b), dac, nullptr);
      CHECK(delay_to_pulses(analog_multiply(va, Nibble(b)), {}) == oracle::mul_count(a, b));
      CHECK(delay_to_pulses(analog_add(va, vb), {}) == oracle::add_count(a + b));
    }
  }
}

TEST_CASE("signal margin matches the clamped Gaussian fold") {
  DacModel dac;
  dac.noise_sigma_lsb = 0.3;
  const double s = 0.3 / 15;
  const std::size_t m = 4000;
  const double critical = 1.628 / std::sqrt(static_cast<double>(m));  // alpha = 0.01
  for (unsigned code = 0; code < 15; ++code) {
    RandomStream rng(77, code);
    const auto samples = signal_margin_samples(dac, code, m, rng);
    const double d = ks_statistic(samples, [&](double x) {
      return oracle::margin_cdf(x, code / 15.0, (code + 1) / 15.0, s);
    });
    CAPTURE(code);
    CHECK(d < critical);
  }
}
