#include <doctest.h>

#include <cmath>
#include <numbers>

#include "riscb/pattern.hpp"

using namespace riscb;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("quantize_phase hits exact grid points") {
  CHECK(quantize_phase(0.0, 4) == 0);
  CHECK(quantize_phase(kPi / 2, 4) == 1);
  CHECK(quantize_phase(kPi, 4) == 2);
  CHECK(quantize_phase(3 * kPi / 2, 4) == 3);
  CHECK(quantize_phase(-kPi / 2, 4) == 3);   // wraps
  CHECK(quantize_phase(2 * kPi, 4) == 0);
  CHECK(quantize_phase(0.3, 2) == 0);
  CHECK(quantize_phase(kPi - 0.3, 2) == 1);
}

TEST_CASE("quantize_phase picks the nearest level") {
  CHECK(quantize_phase(kPi / 4 + 1e-9, 4) == 1);
  CHECK(quantize_phase(kPi / 4 - 1e-9, 4) == 0);
}

TEST_CASE("quantize_phase breaks ties toward the lower index") {
  CHECK(quantize_phase(kPi / 4, 4) == 0);

  // Exact ties are only representable where the angle-to-index conversion
  // cancels in floating point: the (0,1) midpoint pi/B and the wrap-around
  // midpoint -pi/B. Both must resolve to the lower index, 0.
  for (int levels : {2, 4, 8, 16, 32, 64}) {
    CAPTURE(levels);
    CHECK(quantize_phase(kPi / levels, levels) == 0);
    CHECK(quantize_phase(-kPi / levels, levels) == 0);
  }

  // Near-midpoint sweep: just below the (b, b+1) midpoint resolves to b,
  // just above resolves to b+1 (mod B).
  for (int levels : {2, 3, 4, 5, 8, 16}) {
    for (int b = 0; b < levels; ++b) {
      const double mid = kTwoPi * (b + 0.5) / levels;
      CAPTURE(levels);
      CAPTURE(b);
      CHECK(quantize_phase(mid - 1e-9, levels) == b);
      CHECK(quantize_phase(mid + 1e-9, levels) == (b + 1) % levels);
    }
  }
}

TEST_CASE("quantize_phase rejects invalid input") {
  CHECK_THROWS(quantize_phase(0.0, 1));
  CHECK_THROWS(quantize_phase(std::nan(""), 4));
}

TEST_CASE("pattern coefficients are unit modulus and round-trip") {
  RandomStream rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const int levels = 2 + rng.uniform_int(62);
    const int elems = 1 + rng.uniform_int(16);
    const auto rp = ReflectionPattern::uniform_random(elems, levels, rng);
    for (int m = 0; m < rp.size(); ++m) {
      const Complex c = rp.coefficient(m);
      CHECK(std::abs(std::abs(c) - 1.0) < 1e-15);
      CHECK(quantize_phase(std::arg(c), levels) == rp.indices()[static_cast<std::size_t>(m)]);
    }
  }
}

TEST_CASE("all-off pattern has zero coefficients") {
  const auto off = ReflectionPattern::all_off(5, 4);
  CHECK(off.switched_off());
  for (int m = 0; m < 5; ++m) CHECK(std::abs(off.coefficient(m)) == 0.0);
}

TEST_CASE("pattern validates its inputs") {
  CHECK_THROWS(ReflectionPattern({0, 1, 4}, 4));
  CHECK_THROWS(ReflectionPattern({-1}, 4));
  CHECK_THROWS(ReflectionPattern({}, 4));
  CHECK_THROWS(ReflectionPattern({0}, 1));
}
