#pragma once

#include <complex>
#include <optional>
#include <string_view>

namespace fcqkd {

/// Complex field amplitude in normalized units (source amplitude |E0| = 1).
using ComplexAmplitude = std::complex<double>;

enum class ModulatorKind { PM, AM, UM };

std::string_view to_string(ModulatorKind kind);
std::optional<ModulatorKind> parse_modulator_kind(std::string_view text);

/// Modulation depth above which the three-band model is flagged as outside
/// the low modulation regime.
inline constexpr double kLowModulationLimit = 0.2;

/// Generalized two-arm Mach-Zehnder modulator.
///
/// Arm 1 contributes eps1 * exp(j psi) * exp(+j m1 cos(W t + phi)) and arm 2
/// contributes eps2 * exp(-j psi) * exp(-j m2 cos(W t + phi)). PM, AM and UM
/// devices are special cases selected by the coupling and index pattern; use
/// make_modulator() to obtain a spec that satisfies the pattern for its kind.
struct ModulatorSpec {
  ModulatorKind kind = ModulatorKind::PM;
  double eps1 = 1.0;  ///< upper-arm coupling
  double eps2 = 0.0;  ///< lower-arm coupling
  double m1 = 0.0;    ///< upper-arm modulation index [rad]
  double m2 = 0.0;    ///< lower-arm modulation index [rad]
  double psi = 0.0;   ///< DC bias phase [rad]; a pure global phase for PM
  double phi = 0.0;   ///< RF electrical phase [rad]

  /// Largest of the two arm indices.
  double max_index() const noexcept { return m1 > m2 ? m1 : m2; }

  bool outside_low_modulation() const noexcept { return max_index() > kLowModulationLimit; }

  /// Same device with a different RF phase.
  ModulatorSpec with_phi(double new_phi) const noexcept {
    ModulatorSpec copy = *this;
    copy.phi = new_phi;
    return copy;
  }

  /// Same device driven with a different modulation index, applied to every
  /// modulated arm of the kind.
  ModulatorSpec with_index(double m) const;

  /// Both couplings multiplied by `c`.
  ModulatorSpec scaled(double c) const noexcept {
    ModulatorSpec copy = *this;
    copy.eps1 *= c;
    copy.eps2 *= c;
    return copy;
  }

  /// True when the coupling/index pattern matches `kind`.
  bool satisfies_kind_pattern() const noexcept;

  friend bool operator==(const ModulatorSpec&, const ModulatorSpec&) = default;
};

/// Amplitudes of the carrier and the two first-order sidebands.
///
/// Bands are labeled in the exp(+j w t) phasor convention: `upper` is the
/// component rotating as exp(+j W t) and sits at w0 + W.
struct ThreeBandField {
  ComplexAmplitude carrier{};
  ComplexAmplitude lower{};
  ComplexAmplitude upper{};

  double total_power() const noexcept {
    return std::norm(carrier) + std::norm(lower) + std::norm(upper);
  }
};

/// Builds a PM, AM or UM modulator. Couplings are normalized to unit carrier
/// transmission: PM uses eps1 = 1, AM and UM split evenly (eps1 = eps2 = 1/2).
/// Throws Error(InvalidParameter) for a negative or non-finite index.
ModulatorSpec make_modulator(ModulatorKind kind, double m, double psi, double phi);

/// Modulation index produced by an RF drive amplitude: pi * v_rf / v_pi.
double index_from_voltage(double v_rf, double v_pi);

/// Bias phase for a DC voltage: pi * v_dc / (2 v_pi), so that the arm-to-arm
/// phase difference 2 psi equals pi * v_dc / v_pi.
double bias_phase_from_voltage(double v_dc, double v_pi);

/// Small-signal carrier and sideband amplitudes of a single modulator:
///   carrier = eps1 e^{j psi} + eps2 e^{-j psi}
///   upper   = (j/2) (eps1 m1 e^{j psi} - eps2 m2 e^{-j psi}) e^{+j phi}
///   lower   = (j/2) (eps1 m1 e^{j psi} - eps2 m2 e^{-j psi}) e^{-j phi}
ThreeBandField band_amplitudes(const ModulatorSpec& mod);

}  // namespace fcqkd
