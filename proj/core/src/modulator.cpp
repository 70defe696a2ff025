#include "fcqkd/modulator.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fcqkd/error.hpp"

namespace fcqkd {

namespace {

constexpr ComplexAmplitude kJ{0.0, 1.0};

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::InvalidParameter, std::string(name) + " must be finite");
  }
}

}  // namespace

std::string_view to_string(ModulatorKind kind) {
  switch (kind) {
    case ModulatorKind::PM: return "PM";
    case ModulatorKind::AM: return "AM";
    case ModulatorKind::UM: return "UM";
  }
  return "?";
}

std::optional<ModulatorKind> parse_modulator_kind(std::string_view text) {
  if (text == "PM" || text == "pm") return ModulatorKind::PM;
  if (text == "AM" || text == "am") return ModulatorKind::AM;
  if (text == "UM" || text == "um") return ModulatorKind::UM;
  return std::nullopt;
}

ModulatorSpec ModulatorSpec::with_index(double m) const {
  if (!(m >= 0.0) || !std::isfinite(m)) {
    throw Error(ErrorKind::InvalidParameter, "modulation index must be finite and >= 0");
  }
  ModulatorSpec copy = *this;
  copy.m1 = m;
  copy.m2 = kind == ModulatorKind::AM ? m : 0.0;
  return copy;
}

bool ModulatorSpec::satisfies_kind_pattern() const noexcept {
  if (eps1 < 0.0 || eps2 < 0.0 || m1 < 0.0 || m2 < 0.0) return false;
  switch (kind) {
    case ModulatorKind::PM: return eps2 == 0.0 && m2 == 0.0;
    case ModulatorKind::AM: return eps1 == eps2 && m1 == m2;
    case ModulatorKind::UM: return eps1 == eps2 && m2 == 0.0;
  }
  return false;
}

ModulatorSpec make_modulator(ModulatorKind kind, double m, double psi, double phi) {
  if (!(m >= 0.0) || !std::isfinite(m)) {
    throw Error(ErrorKind::InvalidParameter, "modulation index must be finite and >= 0");
  }
  require_finite(psi, "psi");
  require_finite(phi, "phi");

  ModulatorSpec spec;
  spec.kind = kind;
  spec.psi = psi;
  spec.phi = phi;
  switch (kind) {
    case ModulatorKind::PM:
      spec.eps1 = 1.0;
      spec.eps2 = 0.0;
      spec.m1 = m;
      spec.m2 = 0.0;
      break;
    case ModulatorKind::AM:
      spec.eps1 = spec.eps2 = 0.5;
      spec.m1 = spec.m2 = m;
      break;
    case ModulatorKind::UM:
      spec.eps1 = spec.eps2 = 0.5;
      spec.m1 = m;
      spec.m2 = 0.0;
      break;
  }
  return spec;
}

double index_from_voltage(double v_rf, double v_pi) {
  if (!(v_pi > 0.0) || !std::isfinite(v_pi)) {
    throw Error(ErrorKind::InvalidParameter, "v_pi must be > 0");
  }
  if (!(v_rf >= 0.0) || !std::isfinite(v_rf)) {
    throw Error(ErrorKind::InvalidParameter, "v_rf must be >= 0");
  }
  return std::numbers::pi * v_rf / v_pi;
}

double bias_phase_from_voltage(double v_dc, double v_pi) {
  if (!(v_pi > 0.0) || !std::isfinite(v_pi)) {
    throw Error(ErrorKind::InvalidParameter, "v_pi must be > 0");
  }
  require_finite(v_dc, "v_dc");
  return std::numbers::pi * v_dc / (2.0 * v_pi);
}

ThreeBandField band_amplitudes(const ModulatorSpec& mod) {
  const ComplexAmplitude up_arm = std::polar(1.0, mod.psi);
  const ComplexAmplitude down_arm = std::polar(1.0, -mod.psi);

  const ComplexAmplitude sideband =
      0.5 * kJ * (mod.eps1 * mod.m1 * up_arm - mod.eps2 * mod.m2 * down_arm);

  ThreeBandField field;
  field.carrier = mod.eps1 * up_arm + mod.eps2 * down_arm;
  field.upper = sideband * std::polar(1.0, mod.phi);
  field.lower = sideband * std::polar(1.0, -mod.phi);
  return field;
}

}  // namespace fcqkd
