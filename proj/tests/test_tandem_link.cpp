#include "doctest.h"
#include "fcqkd/error.hpp"
#include "fcqkd/tandem_link.hpp"
#include "test_support.hpp"

using namespace fcqkd;
using namespace fcqkd::test;

namespace {

ThreeBandField field(ComplexAmplitude carrier, ComplexAmplitude lower, ComplexAmplitude upper) {
  ThreeBandField f;
  f.carrier = carrier;
  f.lower = lower;
  f.upper = upper;
  return f;
}

void check_field(const ThreeBandField& got, const ThreeBandField& want, double tol = 1e-15) {
  CHECK(near(got.carrier, want.carrier, tol));
  CHECK(near(got.lower, want.lower, tol));
  CHECK(near(got.upper, want.upper, tol));
}

LinkSpec link_with(double phase, double loss = 1.0) {
  LinkSpec link;
  link.link_phase = phase;
  link.loss = loss;
  return link;
}

}  // namespace

TEST_CASE("link spec validation") {
  CHECK_NOTHROW(LinkSpec{}.validate());
  CHECK_THROWS_AS(link_with(0.0, 0.0).validate(), Error);
  CHECK_THROWS_AS(link_with(0.0, 1.5).validate(), Error);
  LinkSpec bad;
  bad.rf_frequency = -1.0;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("propagate") {
  const ComplexAmplitude c{0.03, -0.02};
  check_field(propagate(field(1.0, c, c), link_with(0.0)), field(1.0, c, c));
  check_field(propagate(field(1.0, c, c), link_with(kPi)), field(1.0, -c, -c));

  // Upper band delayed by exp(-j phase), lower advanced by exp(+j phase).
  const ComplexAmplitude j01{0.0, 0.1};
  check_field(propagate(field(1.0, j01, j01), link_with(kPi / 2, 0.25)),
              field(0.5, {-0.05, 0.0}, {0.05, 0.0}));
}

TEST_CASE("propagate conserves power at unit transmittance") {
  SpecGenerator gen(3);
  for (int i = 0; i < 200; ++i) {
    const auto f = band_amplitudes(gen.modulator());
    const auto p = propagate(f, link_with(gen.uniform(-10, 10)));
    CHECK(near(p.total_power(), f.total_power(), 1e-14));
  }
}

TEST_CASE("cascade") {
  const auto a = band_amplitudes(make_modulator(ModulatorKind::AM, 0.1, 0.3, 0.4));
  const auto unit = field(1.0, 0.0, 0.0);
  check_field(cascade(a, unit), a);
  check_field(cascade(unit, a), a);

  // Opposite RF phases on two identical PMs cancel both sidebands.
  const auto pa = band_amplitudes(make_modulator(ModulatorKind::PM, 0.1, 0, 0));
  const auto pb = band_amplitudes(make_modulator(ModulatorKind::PM, 0.1, 0, kPi));
  const auto out = cascade(propagate(pa, link_with(0.0)), pb);
  CHECK(std::abs(out.upper) < 1e-17);
  CHECK(std::abs(out.lower) < 1e-17);
}

TEST_CASE("kappa factors follow the closed forms for UM-PM and UM-AM") {
  for (double psi_a : {0.0, 0.3, 1.0, 2.5}) {
    const auto um = make_modulator(ModulatorKind::UM, 0.08, psi_a, 0);
    const auto pm = make_modulator(ModulatorKind::PM, 0.05, 0, 0);
    const auto k = kappa_factors(um, pm);
    // Ratio of the scaled forms |kappa0| ~ m_A / 2, |kappa1| ~ m_B cos(psi_A).
    CHECK(near(std::abs(k.kappa1) * 0.08 / 2, std::abs(k.kappa0) * 0.05 * std::abs(std::cos(psi_a)), 1e-15));

    for (double psi_b : {0.2, 0.7, 1.3}) {
      const auto am = make_modulator(ModulatorKind::AM, 0.05, psi_b, 0);
      const auto q = kappa_factors(um, am);
      const double want0 = 0.08 / 2 * std::cos(psi_b);
      const double want1 = 0.05 * std::abs(std::cos(psi_a)) * std::sin(psi_b);
      CHECK(near(std::abs(q.kappa0) * want1, std::abs(q.kappa1) * want0, 1e-15));
    }
  }
}

TEST_CASE("PM-PM kappa ratio and theta") {
  const auto a = make_modulator(ModulatorKind::PM, 0.12, 0.4, 1.0);
  const auto b = make_modulator(ModulatorKind::PM, 0.03, -0.9, 2.0);
  const auto r = analyze_tandem(a, b);
  CHECK(near(std::abs(r.kappa0) / std::abs(r.kappa1), 4.0, 1e-12));
  REQUIRE(r.theta.has_value());
  CHECK(near(*r.theta, 0.0, 1e-15));
}

TEST_CASE("visibility") {
  CHECK(visibility({0.3, 0.4}, {0.0, 0.5}) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(visibility({1.0, 0.0}, {0.0, 0.0}) == 0.0);
  CHECK(near(visibility({1.0, 0.0}, {0.0, 0.5}), 0.8, 1e-15));
  CHECK_THROWS_AS(visibility({0.0, 0.0}, {0.0, 0.0}), Error);
}

TEST_CASE("theta") {
  CHECK(near(theta({1.0, 0.0}, {0.0, 2.0}), kPi / 2, 1e-15));
  CHECK(near(theta({1.0, 0.0}, {-1.0, 0.0}), kPi, 1e-15));
  CHECK(near(theta({-1.0, 0.0}, {0.0, -1e-300}), kPi / 2, 1e-15));
  try {
    theta({1.0, 0.0}, {0.0, 0.0});
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::ThetaUndefined);
  }

  const auto pm = make_modulator(ModulatorKind::PM, 0.1, 0, 0);
  for (double psi : {0.2, 0.7, 1.4}) {
    CHECK(near(*analyze_tandem(pm, make_modulator(ModulatorKind::AM, 0.1, psi, 0)).theta, kPi / 2,
               1e-12));
    CHECK(near(*analyze_tandem(make_modulator(ModulatorKind::UM, 0.1, psi, 0), pm).theta, -psi,
               1e-12));
    const auto am = make_modulator(ModulatorKind::AM, 0.1, 0.5, 0);
    CHECK(near(*analyze_tandem(make_modulator(ModulatorKind::UM, 0.1, psi, 0), am).theta,
               kPi / 2 - psi, 1e-12));
  }
}

TEST_CASE("degenerate tandem") {
  // AM at psi = 0 produces no sidebands; UM at pi/2 kills the carrier.
  const auto am0 = make_modulator(ModulatorKind::AM, 0.1, 0, 0);
  CHECK(kappa0_vanishes(am0, am0));
  CHECK(kappa1_vanishes(am0, am0));
  try {
    analyze_tandem(am0, am0);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DegenerateConfiguration);
  }
  CHECK_THROWS_AS(sideband_powers(am0, am0, LinkSpec{}), Error);

  const auto um = make_modulator(ModulatorKind::UM, 0.1, kPi / 2, 0);
  const auto pm = make_modulator(ModulatorKind::PM, 0.05, 0, 0);
  CHECK(kappa1_vanishes(um, pm));
  CHECK_FALSE(kappa0_vanishes(um, pm));
  const auto r = analyze_tandem(um, pm);
  CHECK(r.visibility == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_FALSE(r.theta.has_value());
}

TEST_CASE("sideband powers: named points") {
  SUBCASE("B92 extinction") {
    const auto a = make_modulator(ModulatorKind::UM, 0.1, 0, 0);
    const auto b = make_modulator(ModulatorKind::PM, 0.05, 0, kPi);
    const auto p = sideband_powers(a, b, LinkSpec{});
    CHECK(near(p.upper, 0.0, 1e-15));
    CHECK(near(p.lower, 0.0, 1e-15));
    const auto d = sideband_powers_direct(a, b, LinkSpec{});
    CHECK(near(d.upper, 0.0, 1e-15));
    CHECK(near(d.lower, 0.0, 1e-15));
  }
  SUBCASE("BB84 at delta-phi pi/2") {
    const auto a = make_modulator(ModulatorKind::UM, 0.1, 0, 0);
    const auto am = make_modulator(ModulatorKind::AM, 0.05, kPi / 4, 0);
    const double th = *analyze_tandem(a, am).theta;
    const auto b = am.with_phi(kPi / 2 - th);
    const auto p = sideband_powers(a, b, LinkSpec{});
    CHECK(near(p.upper, 0.5, 1e-15));
    CHECK(near(p.lower, 0.5, 1e-15));
  }
  SUBCASE("unit power at zero argument") {
    const auto a = make_modulator(ModulatorKind::PM, 0.1, 0, 0.4);
    const auto b = make_modulator(ModulatorKind::PM, 0.1, 0, 0.4 - 0.9);
    const auto p = sideband_powers(a, b, link_with(0.9));
    CHECK(near(p.upper, 1.0, 1e-15));
    CHECK(near(p.lower, 1.0, 1e-15));
  }
}

TEST_CASE("closed form equals direct cascade over random draws") {
  SpecGenerator gen(2024);
  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    const auto a = gen.modulator();
    const auto b = gen.modulator();
    const auto link = link_with(gen.uniform(-kPi, kPi), gen.uniform(0.05, 1.0));
    if (kappa0_vanishes(a, b) && kappa1_vanishes(a, b)) continue;
    const auto c = sideband_powers(a, b, link);
    const auto d = sideband_powers_direct(a, b, link);
    CHECK(near(c.upper, d.upper, 1e-12));
    CHECK(near(c.lower, d.lower, 1e-12));
    CHECK(c.upper >= -1e-15);
    CHECK(c.upper <= 1 + 1e-15);
    ++checked;
  }
  CHECK(checked > 1500);
}

TEST_CASE("sideband sum identity and scale invariance") {
  SpecGenerator gen(99);
  for (int i = 0; i < 500; ++i) {
    const auto a = gen.modulator();
    const auto b = gen.modulator();
    if (kappa0_vanishes(a, b) || kappa1_vanishes(a, b)) continue;
    const auto link = link_with(gen.uniform(-kPi, kPi));
    const auto r = analyze_tandem(a, b);
    const auto p = sideband_powers(a, b, link);
    const double x = b.phi - a.phi + link.link_phase;
    CHECK(near(p.upper + p.lower, 1 + r.visibility * std::cos(*r.theta) * std::cos(x), 1e-12));

    const auto s = sideband_powers(a.scaled(gen.uniform(0.2, 5)), b.scaled(gen.uniform(0.2, 5)), link);
    CHECK(near(s.upper, p.upper, 1e-12));
    CHECK(near(s.lower, p.lower, 1e-12));
  }
}

TEST_CASE("upper band carries +theta") {
  // Locks the sideband assignment: PM-AM has theta = pi/2, so at
  // phi_B - phi_A + link_phase = -pi/2 the upper band is fully bright.
  const auto a = make_modulator(ModulatorKind::PM, 0.1, 0, 0);
  const auto b = make_modulator(ModulatorKind::AM, 0.1, kPi / 4, -kPi / 2);
  const auto p = sideband_powers(a, b, LinkSpec{});
  CHECK(near(p.upper, 1.0, 1e-14));
  CHECK(near(p.lower, 0.0, 1e-14));
  const auto d = sideband_powers_direct(a, b, LinkSpec{});
  CHECK(near(d.upper, 1.0, 1e-14));
  CHECK(near(d.lower, 0.0, 1e-14));
}

TEST_CASE("angle wrapping") {
  CHECK(near(wrap_pi(3 * kPi / 2), -kPi / 2, 1e-15));
  CHECK(near(wrap_pi(-kPi), kPi, 1e-15));
  CHECK(near(wrap_pi(kPi), kPi, 1e-15));
  CHECK(near(wrap_two_pi(-kPi / 2), 3 * kPi / 2, 1e-15));
  CHECK(wrap_two_pi(2 * kPi) == 0.0);
}
