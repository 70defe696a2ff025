#include <cmath>

#include "doctest.h"
#include "fcqkd/error.hpp"
#include "fcqkd/exact_oracle.hpp"
#include "fcqkd/tandem_link.hpp"
#include "test_support.hpp"

using namespace fcqkd;
using namespace fcqkd::test;

namespace {

constexpr std::complex<double> j{0.0, 1.0};

LinkSpec link_with(double phase, double loss = 1.0) {
  LinkSpec link;
  link.link_phase = phase;
  link.loss = loss;
  return link;
}

}  // namespace

TEST_CASE("bessel_j reference values") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(1, 0.0) == 0.0);
  CHECK(near(bessel_j(1, 0.1), 0.049937526036242, 1e-15));
  CHECK(near(bessel_j(0, 0.1), 0.997501562066040, 1e-15));
  CHECK(near(bessel_j(2, 0.1), 1.248958658799919e-03, 1e-17));
  CHECK(near(bessel_j(1, 1.5), 0.557936507910100, 1e-15));
  CHECK(near(bessel_j(3, 1.2), 3.287433692499494e-02, 1e-16));
}

TEST_CASE("bessel_j parity and domain") {
  for (int k = 0; k <= 12; ++k) {
    for (double x : {-1.5, -0.7, 0.0, 0.3, 1.1, 1.5}) {
      const double sign = (k % 2 == 0) ? 1.0 : -1.0;
      CHECK(bessel_j(-k, x) == doctest::Approx(sign * bessel_j(k, x)).epsilon(1e-15));
      CHECK(bessel_j(k, -x) == doctest::Approx(sign * bessel_j(k, x)).epsilon(1e-15));
    }
  }
  try {
    bessel_j(1, 1.6);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OutOfDomain);
  }
}

TEST_CASE("bessel_j satisfies the three-term recurrence") {
  for (double x : {0.2, 0.9, 1.4}) {
    for (int k = 1; k <= 8; ++k) {
      const double lhs = bessel_j(k - 1, x) + bessel_j(k + 1, x);
      const double rhs = 2.0 * k / x * bessel_j(k, x);
      CHECK(near(lhs, rhs, 1e-15));
    }
  }
}

TEST_CASE("harmonic spectrum container") {
  HarmonicSpectrum s(3);
  CHECK(s.size() == 7);
  s.at(-3) = 1.0;
  s.at(2) = j;
  CHECK(s.amplitude(5) == std::complex<double>{});
  CHECK(s.total_power() == 2.0);
  CHECK(default_harmonic_order(0.1) == 9);
  CHECK(default_harmonic_order(1.0) == 11);
}

TEST_CASE("single modulator spectra") {
  SUBCASE("unmodulated PM") {
    const auto s = exact_modulator_spectrum(make_modulator(ModulatorKind::PM, 0.0, 0, 0), 8);
    CHECK(near(s.at(0), 1.0, 1e-15));
    CHECK(near(s.total_power(), 1.0, 1e-15));
  }
  SUBCASE("PM first harmonics") {
    const auto s = exact_modulator_spectrum(make_modulator(ModulatorKind::PM, 0.1, 0, 0), 9);
    CHECK(near(s.at(1), j * 0.049937526036242, 1e-15));
    CHECK(near(s.at(-1), j * 0.049937526036242, 1e-15));
  }
  SUBCASE("AM at psi = pi/2 keeps only odd harmonics") {
    for (double m : {0.1, 0.8}) {
      const auto s = exact_modulator_spectrum(make_modulator(ModulatorKind::AM, m, kPi / 2, 0.4), 12);
      for (int k = -12; k <= 12; k += 2) CHECK(std::abs(s.at(k)) < 1e-16);
      CHECK(std::abs(s.at(1)) > 0.01);
    }
  }
  SUBCASE("order below the truncation bound") {
    try {
      exact_modulator_spectrum(make_modulator(ModulatorKind::PM, 1.0, 0, 0), 7);
      FAIL("expected throw");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::TruncationRisk);
    }
  }
}

TEST_CASE("phase modulation conserves energy") {
  for (double m : {0.1, 0.5, 1.0}) {
    for (double phi : {0.0, 1.3}) {
      const auto mod = make_modulator(ModulatorKind::PM, m, 0, phi);
      const auto s = exact_modulator_spectrum(mod, default_harmonic_order(m));
      CHECK(near(s.total_power(), mod.eps1 * mod.eps1, 1e-12));
    }
  }
}

TEST_CASE("MZI spectra never exceed the input power") {
  SpecGenerator gen(8);
  for (int i = 0; i < 200; ++i) {
    const auto mod = gen.modulator(1.5);
    const auto s = exact_modulator_spectrum(mod, default_harmonic_order(mod.max_index()));
    CHECK(s.total_power() <= 1.0 + 1e-12);
  }
}

TEST_CASE("exact first harmonics converge to the three-band model") {
  SpecGenerator gen(21);
  for (int i = 0; i < 50; ++i) {
    const auto base = gen.modulator();
    if (base.kind == ModulatorKind::AM && std::abs(std::sin(base.psi)) < 0.1) continue;
    auto rel = [&](double m) {
      const auto mod = base.with_index(m);
      const auto exact = exact_modulator_spectrum(mod, default_harmonic_order(m));
      const auto approx = band_amplitudes(mod);
      return std::abs(exact.at(1) - approx.upper) / std::abs(approx.upper);
    };
    const double e1 = rel(0.01);
    const double e2 = rel(0.1);
    CHECK(e1 < 1e-4);
    // Observed order in m is at least two.
    CHECK(std::log10(e2 / e1) >= 1.9);
  }
}

TEST_CASE("tandem spectra") {
  const auto off_pm = make_modulator(ModulatorKind::PM, 0.0, 0, 0);
  SUBCASE("both modulators off") {
    const auto s = exact_tandem_spectrum(off_pm, off_pm, LinkSpec{}, 8);
    CHECK(near(s.at(0), 1.0, 1e-15));
    CHECK(near(s.total_power(), 1.0, 1e-15));
  }
  SUBCASE("Bob off reproduces Alice with link phases") {
    const auto alice = make_modulator(ModulatorKind::PM, 0.1, 0, 0.6);
    const auto link = link_with(0.9, 0.64);
    const auto a = exact_modulator_spectrum(alice, 9);
    const auto t = exact_tandem_spectrum(alice, off_pm, link, 9);
    for (int k = -9; k <= 9; ++k) {
      CHECK(near(t.at(k), 0.8 * a.at(k) * std::polar(1.0, -k * 0.9), 1e-17));
    }
  }
  SUBCASE("PM-PM against an independent numerical transform") {
    // Frozen from a 64-point DFT of the time-domain product field.
    const auto s = exact_tandem_spectrum(make_modulator(ModulatorKind::PM, 0.1, 0, 0),
                                         make_modulator(ModulatorKind::PM, 0.1, 0, kPi / 2),
                                         link_with(0.3), 10);
    CHECK(near(s.at(1), {-0.03516198960337613, 0.047682746923320425}, 1e-14));
    CHECK(near(s.at(-1), {0.03516198960337613, 0.04768274692332043}, 1e-14));
    CHECK(near(s.at(0), 0.9964807016432096, 1e-14));
  }
  SUBCASE("finite-depth extinction at the B92 point") {
    const auto s = exact_tandem_spectrum(make_modulator(ModulatorKind::UM, 0.1, 0, 0),
                                         make_modulator(ModulatorKind::PM, 0.05, 0, kPi),
                                         LinkSpec{}, 9);
    CHECK(std::norm(s.at(1)) <= 2.6e-6);
    CHECK(std::norm(s.at(-1)) <= 2.6e-6);
    CHECK(std::norm(s.at(0)) > 0.99);
  }
}

TEST_CASE("small-signal error") {
  const auto a = make_modulator(ModulatorKind::PM, 0.01, 0, 0);
  const auto b = make_modulator(ModulatorKind::PM, 0.01, 0, 0.5);
  const auto e = small_signal_error(a, b, LinkSpec{});
  CHECK(e.upper <= 1e-4);
  CHECK(e.lower <= 1e-4);
  CHECK_FALSE(e.upper_absolute);

  const auto e10 = small_signal_error(a.with_index(0.1), b.with_index(0.1), LinkSpec{});
  CHECK(e10.upper <= 1e-2);
  CHECK(e10.upper / e.upper >= 50);
  CHECK(e10.upper / e.upper <= 200);
}

TEST_CASE("small-signal lattice regression") {
  double worst_small = 0.0;
  double worst_large = 0.0;
  const auto small = small_signal_lattice(0.01);
  const auto large = small_signal_lattice(0.1);
  REQUIRE(small.size() == 9);
  REQUIRE(large.size() == 9);
  for (std::size_t i = 0; i < 9; ++i) {
    CHECK(small[i].points > 200);
    worst_small = std::max(worst_small, small[i].worst_relative);
    worst_large = std::max(worst_large, large[i].worst_relative);
    const double ratio = large[i].worst_relative / small[i].worst_relative;
    CHECK(ratio >= 50);
    CHECK(ratio <= 200);
  }
  // Frozen after the first oracle run.
  CHECK(worst_small == doctest::Approx(4.263008e-05).epsilon(1e-6));
  CHECK(worst_large == doctest::Approx(4.270739e-03).epsilon(1e-6));
}
