#pragma once

#include <numbers>
#include <optional>

#include "fcqkd/modulator.hpp"

namespace fcqkd {

/// Dispersion-compensated fiber link between Alice and Bob.
///
/// Only the product W * beta1 * L (the sideband delay phase) enters the
/// normalized powers; the RF frequency is kept for labeling spectra.
struct LinkSpec {
  double rf_frequency = 2.0 * std::numbers::pi * 15e9;  ///< W [rad/s]
  double link_phase = 0.0;  ///< W * beta1 * L [rad]
  double loss = 1.0;        ///< power transmittance in (0, 1]

  /// Throws Error(InvalidParameter) when a field is out of range.
  void validate() const;

  LinkSpec with_link_phase(double phase) const noexcept {
    LinkSpec copy = *this;
    copy.link_phase = phase;
    return copy;
  }
};

struct KappaPair {
  ComplexAmplitude kappa0;  ///< Alice-generated sideband term, weighted by Bob's carrier
  ComplexAmplitude kappa1;  ///< Bob-generated sideband term, weighted by Alice's carrier
};

struct TandemResult {
  ComplexAmplitude kappa0;
  ComplexAmplitude kappa1;
  double visibility = 0.0;
  /// arg(kappa1) - arg(kappa0) wrapped to (-pi, pi]; empty when either kappa vanishes.
  std::optional<double> theta;
  double norm = 0.0;  ///< |kappa0|^2 + |kappa1|^2
};

struct SidebandPowers {
  double upper = 0.0;
  double lower = 0.0;
};

/// Applies the link: sidebands pick up the delay phase (upper exp(-j phase),
/// lower exp(+j phase)) and every band is scaled by sqrt(loss). The common
/// carrier phase is dropped.
ThreeBandField propagate(const ThreeBandField& field, const LinkSpec& link);

/// First-order product of Alice's propagated field with Bob's modulator bands.
ThreeBandField cascade(const ThreeBandField& alice_prop, const ThreeBandField& bob);

/// Interference factors kappa0 and kappa1, including the common j/2 sideband
/// prefactor (it cancels in the visibility and in theta).
KappaPair kappa_factors(const ModulatorSpec& alice, const ModulatorSpec& bob);

/// True when kappa0 (or kappa1) vanishes by cancellation, judged against the
/// largest value its coupling and index magnitudes allow.
bool kappa0_vanishes(const ModulatorSpec& alice, const ModulatorSpec& bob);
bool kappa1_vanishes(const ModulatorSpec& alice, const ModulatorSpec& bob);

/// 2|k0||k1| / (|k0|^2 + |k1|^2). Throws DegenerateConfiguration when both are zero.
double visibility(ComplexAmplitude k0, ComplexAmplitude k1);

/// arg(k1) - arg(k0) wrapped to (-pi, pi]. Throws ThetaUndefined when either is zero.
double theta(ComplexAmplitude k0, ComplexAmplitude k1);

/// Kappa factors, visibility and theta for a modulator pair.
/// Throws DegenerateConfiguration when both kappas vanish.
TandemResult analyze_tandem(const ModulatorSpec& alice, const ModulatorSpec& bob);

/// Closed-form normalized sideband powers
///   P(upper/lower) = 1/2 [1 + V cos(phi_B - phi_A + link_phase +/- theta)].
SidebandPowers sideband_powers(const ModulatorSpec& alice, const ModulatorSpec& bob,
                               const LinkSpec& link);

/// The same powers computed directly from the cascaded three-band field,
/// normalized by 2 * loss * (|kappa0|^2 + |kappa1|^2).
SidebandPowers sideband_powers_direct(const ModulatorSpec& alice, const ModulatorSpec& bob,
                                      const LinkSpec& link);

/// Wraps an angle to (-pi, pi].
double wrap_pi(double angle);

/// Wraps an angle to [0, 2 pi).
double wrap_two_pi(double angle);

}  // namespace fcqkd
