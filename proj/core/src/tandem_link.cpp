#include "fcqkd/tandem_link.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fcqkd/error.hpp"

namespace fcqkd {

namespace {

constexpr ComplexAmplitude kHalfJ{0.0, 0.5};

// Relative size below which a kappa is treated as an exact cancellation.
constexpr double kVanishingRatio = 1e-12;

ComplexAmplitude carrier_term(const ModulatorSpec& mod) {
  return mod.eps1 * std::polar(1.0, mod.psi) + mod.eps2 * std::polar(1.0, -mod.psi);
}

ComplexAmplitude index_term(const ModulatorSpec& mod) {
  return mod.eps1 * mod.m1 * std::polar(1.0, mod.psi) -
         mod.eps2 * mod.m2 * std::polar(1.0, -mod.psi);
}

double carrier_bound(const ModulatorSpec& mod) { return mod.eps1 + mod.eps2; }

double index_bound(const ModulatorSpec& mod) {
  return mod.eps1 * mod.m1 + mod.eps2 * mod.m2;
}

bool vanishes(ComplexAmplitude value, double bound) {
  return bound == 0.0 || std::abs(value) <= kVanishingRatio * bound;
}

}  // namespace

void LinkSpec::validate() const {
  if (!(rf_frequency > 0.0) || !std::isfinite(rf_frequency)) {
    throw Error(ErrorKind::InvalidParameter, "rf_frequency must be > 0");
  }
  if (!std::isfinite(link_phase)) {
    throw Error(ErrorKind::InvalidParameter, "link_phase must be finite");
  }
  if (!(loss > 0.0 && loss <= 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "loss must lie in (0, 1]");
  }
}

double wrap_pi(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::remainder(angle, two_pi);  // [-pi, pi]
  if (wrapped <= -std::numbers::pi) wrapped += two_pi;
  return wrapped;
}

double wrap_two_pi(double angle) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(angle, two_pi);
  if (wrapped < 0.0) wrapped += two_pi;
  if (wrapped >= two_pi) wrapped -= two_pi;
  return wrapped;
}

ThreeBandField propagate(const ThreeBandField& field, const LinkSpec& link) {
  const double amplitude = std::sqrt(link.loss);
  ThreeBandField out;
  out.carrier = amplitude * field.carrier;
  out.upper = amplitude * field.upper * std::polar(1.0, -link.link_phase);
  out.lower = amplitude * field.lower * std::polar(1.0, link.link_phase);
  return out;
}

ThreeBandField cascade(const ThreeBandField& alice_prop, const ThreeBandField& bob) {
  ThreeBandField out;
  out.carrier = alice_prop.carrier * bob.carrier;
  out.lower = bob.carrier * alice_prop.lower + alice_prop.carrier * bob.lower;
  out.upper = bob.carrier * alice_prop.upper + alice_prop.carrier * bob.upper;
  return out;
}

KappaPair kappa_factors(const ModulatorSpec& alice, const ModulatorSpec& bob) {
  return {kHalfJ * carrier_term(bob) * index_term(alice),
          kHalfJ * carrier_term(alice) * index_term(bob)};
}

bool kappa0_vanishes(const ModulatorSpec& alice, const ModulatorSpec& bob) {
  const auto k = kappa_factors(alice, bob);
  return vanishes(k.kappa0, 0.5 * carrier_bound(bob) * index_bound(alice));
}

bool kappa1_vanishes(const ModulatorSpec& alice, const ModulatorSpec& bob) {
  const auto k = kappa_factors(alice, bob);
  return vanishes(k.kappa1, 0.5 * carrier_bound(alice) * index_bound(bob));
}

double visibility(ComplexAmplitude k0, ComplexAmplitude k1) {
  const double a0 = std::abs(k0);
  const double a1 = std::abs(k1);
  const double norm = a0 * a0 + a1 * a1;
  if (norm == 0.0) {
    throw Error(ErrorKind::DegenerateConfiguration, "both kappa factors are zero");
  }
  return 2.0 * a0 * a1 / norm;
}

double theta(ComplexAmplitude k0, ComplexAmplitude k1) {
  if (std::abs(k0) * std::abs(k1) == 0.0) {
    throw Error(ErrorKind::ThetaUndefined, "theta needs both kappa factors nonzero");
  }
  return wrap_pi(std::arg(k1) - std::arg(k0));
}

TandemResult analyze_tandem(const ModulatorSpec& alice, const ModulatorSpec& bob) {
  const auto k = kappa_factors(alice, bob);
  const bool zero0 = kappa0_vanishes(alice, bob);
  const bool zero1 = kappa1_vanishes(alice, bob);
  if (zero0 && zero1) {
    throw Error(ErrorKind::DegenerateConfiguration,
                "no sideband light: both kappa factors vanish for " +
                    std::string(to_string(alice.kind)) + "-" + std::string(to_string(bob.kind)));
  }

  TandemResult result;
  result.kappa0 = k.kappa0;
  result.kappa1 = k.kappa1;
  result.norm = std::norm(k.kappa0) + std::norm(k.kappa1);
  result.visibility = visibility(k.kappa0, k.kappa1);
  if (!zero0 && !zero1) result.theta = theta(k.kappa0, k.kappa1);
  return result;
}

SidebandPowers sideband_powers(const ModulatorSpec& alice, const ModulatorSpec& bob,
                               const LinkSpec& link) {
  const TandemResult tandem = analyze_tandem(alice, bob);
  // With a vanishing kappa the visibility is ~0 and theta has no effect.
  const double th = tandem.theta.value_or(0.0);
  const double base = bob.phi - alice.phi + link.link_phase;
  return {0.5 * (1.0 + tandem.visibility * std::cos(base + th)),
          0.5 * (1.0 + tandem.visibility * std::cos(base - th))};
}

SidebandPowers sideband_powers_direct(const ModulatorSpec& alice, const ModulatorSpec& bob,
                                      const LinkSpec& link) {
  const TandemResult tandem = analyze_tandem(alice, bob);
  const ThreeBandField out =
      cascade(propagate(band_amplitudes(alice), link), band_amplitudes(bob));
  const double scale = 2.0 * link.loss * tandem.norm;
  return {std::norm(out.upper) / scale, std::norm(out.lower) / scale};
}

}  // namespace fcqkd
