#include "doctest.h"
#include "fcqkd/error.hpp"
#include "fcqkd/modulator.hpp"
#include "test_support.hpp"

using namespace fcqkd;
using namespace fcqkd::test;

TEST_CASE("make_modulator fills the coefficient pattern of each kind") {
  const auto pm = make_modulator(ModulatorKind::PM, 0.2, 0.0, 0.0);
  CHECK(pm.eps1 == 1.0);
  CHECK(pm.eps2 == 0.0);
  CHECK(pm.m1 == 0.2);
  CHECK(pm.m2 == 0.0);

  const auto am = make_modulator(ModulatorKind::AM, 0.1, kPi / 4, kPi / 2);
  CHECK(am.eps1 == 0.5);
  CHECK(am.eps2 == 0.5);
  CHECK(am.m1 == 0.1);
  CHECK(am.m2 == 0.1);
  CHECK(am.psi == kPi / 4);
  CHECK(am.phi == kPi / 2);

  const auto um = make_modulator(ModulatorKind::UM, 0.1, kPi / 3, 0.0);
  CHECK(um.eps1 == 0.5);
  CHECK(um.eps2 == 0.5);
  CHECK(um.m1 == 0.1);
  CHECK(um.m2 == 0.0);
  CHECK(um.psi == kPi / 3);
}

TEST_CASE("make_modulator rejects bad indices") {
  CHECK_THROWS_AS(make_modulator(ModulatorKind::PM, -0.1, 0.0, 0.0), Error);
  CHECK_THROWS_AS(make_modulator(ModulatorKind::AM, std::nan(""), 0.0, 0.0), Error);
  try {
    make_modulator(ModulatorKind::UM, -1.0, 0.0, 0.0);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InvalidParameter);
  }
}

TEST_CASE("kind invariants hold for random constructions") {
  SpecGenerator gen(11);
  for (int i = 0; i < 500; ++i) {
    const auto mod = gen.modulator(1.0);
    CHECK(mod.satisfies_kind_pattern());
    CHECK(mod.with_index(0.05).satisfies_kind_pattern());
    CHECK(mod.with_phi(1.0).satisfies_kind_pattern());
  }
}

TEST_CASE("low-modulation flag") {
  CHECK_FALSE(make_modulator(ModulatorKind::UM, 0.2, 0, 0).outside_low_modulation());
  CHECK(make_modulator(ModulatorKind::UM, 0.21, 0, 0).outside_low_modulation());
}

TEST_CASE("voltage maps") {
  CHECK(index_from_voltage(0.0, 5.5) == 0.0);
  CHECK(near(index_from_voltage(5.5, 5.5), kPi, 1e-15));
  CHECK(near(index_from_voltage(0.175, 5.5), 0.09995976625058432, 1e-15));
  CHECK(near(index_from_voltage(0.175, 5.5), 0.1, 1e-3));
  CHECK_THROWS_AS(index_from_voltage(1.0, 0.0), Error);
  CHECK_THROWS_AS(index_from_voltage(-1.0, 5.5), Error);

  CHECK(bias_phase_from_voltage(0.0, 4.7) == 0.0);
  CHECK(near(bias_phase_from_voltage(4.7, 4.7), kPi / 2, 1e-15));
  CHECK(near(bias_phase_from_voltage(2.35, 4.7), kPi / 4, 1e-15));
  CHECK_THROWS_AS(bias_phase_from_voltage(1.0, -2.0), Error);
}

TEST_CASE("band amplitudes") {
  SUBCASE("PM at null bias") {
    const auto f = band_amplitudes(make_modulator(ModulatorKind::PM, 0.2, 0, 0));
    CHECK(near(f.carrier, {1.0, 0.0}, 1e-15));
    CHECK(near(f.upper, {0.0, 0.1}, 1e-15));
    CHECK(near(f.lower, {0.0, 0.1}, 1e-15));
  }
  SUBCASE("AM at quadrature") {
    const auto f = band_amplitudes(make_modulator(ModulatorKind::AM, 0.1, kPi / 4, 0));
    CHECK(near(f.carrier, {0.7071067811865476, 0.0}, 1e-15));
    CHECK(near(f.upper, {-0.035355339059327376, 0.0}, 1e-15));
    CHECK(near(f.lower, {-0.035355339059327376, 0.0}, 1e-15));
  }
  SUBCASE("UM carrier suppression") {
    const auto f = band_amplitudes(make_modulator(ModulatorKind::UM, 0.1, kPi / 2, 0));
    CHECK(std::abs(f.carrier) < 1e-16);
  }
  SUBCASE("RF phase sign per band") {
    const auto f0 = band_amplitudes(make_modulator(ModulatorKind::PM, 0.2, 0, 0));
    const auto f = band_amplitudes(make_modulator(ModulatorKind::PM, 0.2, 0, 0.3));
    CHECK(near(f.upper, f0.upper * std::polar(1.0, 0.3), 1e-15));
    CHECK(near(f.lower, f0.lower * std::polar(1.0, -0.3), 1e-15));
  }
}

TEST_CASE("band amplitude properties") {
  SpecGenerator gen(5);
  for (int i = 0; i < 300; ++i) {
    const auto mod = gen.modulator();
    const auto f = band_amplitudes(mod);
    const auto f_shift = band_amplitudes(mod.with_phi(mod.phi + gen.uniform(0, 2 * kPi)));
    CHECK(near(std::abs(f.upper), std::abs(f_shift.upper), 1e-15));
    CHECK(near(std::abs(f.lower), std::abs(f.upper), 1e-15));
    CHECK(std::isfinite(f.total_power()));

    if (mod.kind == ModulatorKind::AM) {
      const auto f_zero = band_amplitudes(mod.with_phi(0.0));
      CHECK(near(f_zero.upper, f_zero.lower, 1e-15));
    }

    const double c = gen.uniform(0.1, 3.0);
    const auto fs = band_amplitudes(mod.scaled(c));
    CHECK(near(fs.carrier, c * f.carrier, 1e-14));
    CHECK(near(fs.upper, c * f.upper, 1e-14));
    CHECK(near(fs.lower, c * f.lower, 1e-14));
  }
}

TEST_CASE("PM at null bias magnitudes") {
  for (double m : {0.0, 0.05, 0.1, 0.2}) {
    const auto f = band_amplitudes(make_modulator(ModulatorKind::PM, m, 0, 1.1));
    CHECK(near(std::abs(f.carrier), 1.0, 1e-15));
    CHECK(near(std::abs(f.upper), m / 2, 1e-15));
  }
}

TEST_CASE("kind names round-trip") {
  for (auto k : {ModulatorKind::PM, ModulatorKind::AM, ModulatorKind::UM}) {
    CHECK(parse_modulator_kind(to_string(k)) == k);
  }
  CHECK_FALSE(parse_modulator_kind("XM").has_value());
}
