#pragma once

#include <cstddef>
#include <vector>

#include "fcqkd/modulator.hpp"
#include "fcqkd/tandem_link.hpp"

namespace fcqkd {

/// Largest |x| accepted by bessel_j.
inline constexpr double kBesselMaxArgument = 1.5;

/// Bessel function of the first kind J_k(x) by its ascending power series,
/// for |x| <= 1.5. Negative orders use J_{-k}(x) = (-1)^k J_k(x).
/// Throws Error(OutOfDomain) outside that range.
double bessel_j(int k, double x);

/// Harmonic amplitudes at w0 + k W for k in [-order, order].
class HarmonicSpectrum {
 public:
  HarmonicSpectrum() = default;
  explicit HarmonicSpectrum(int order);

  int order() const noexcept { return order_; }
  std::size_t size() const noexcept { return amps_.size(); }

  ComplexAmplitude& at(int k);
  const ComplexAmplitude& at(int k) const;

  /// Zero for |k| > order.
  ComplexAmplitude amplitude(int k) const noexcept;

  double total_power() const noexcept;

  const std::vector<ComplexAmplitude>& amplitudes() const noexcept { return amps_; }

 private:
  int order_ = 0;
  std::vector<ComplexAmplitude> amps_;
};

/// Default truncation order ceil(3 m_max) + 8.
int default_harmonic_order(double max_index);

/// Exact Jacobi-Anger expansion of one modulator (no small-signal step).
/// Requires order >= 3 max(m1, m2) + 5, otherwise throws TruncationRisk.
HarmonicSpectrum exact_modulator_spectrum(const ModulatorSpec& mod, int order);

/// Exact tandem output: Alice's spectrum with harmonic k delayed by
/// exp(-j k link_phase) and scaled by sqrt(loss), convolved with Bob's.
/// Throws TruncationRisk when the energy beyond `order` exceeds 1e-12.
HarmonicSpectrum exact_tandem_spectrum(const ModulatorSpec& alice, const ModulatorSpec& bob,
                                       const LinkSpec& link, int order);

struct SmallSignalError {
  double upper = 0.0;
  double lower = 0.0;
  bool upper_absolute = false;  ///< small-signal power below kZeroPowerFloor
  bool lower_absolute = false;
};

/// Small-signal sideband power below which the relative error is
/// ill-conditioned (the fringe is near extinction); the absolute error is
/// reported there instead.
inline constexpr double kZeroPowerFloor = 0.25;

/// Relative difference between the exact first-harmonic powers and the
/// closed-form sideband powers, both normalized by 2 loss (|kappa0|^2 + |kappa1|^2).
SmallSignalError small_signal_error(const ModulatorSpec& alice, const ModulatorSpec& bob,
                                    const LinkSpec& link);

struct PairErrorSummary {
  ModulatorKind alice = ModulatorKind::PM;
  ModulatorKind bob = ModulatorKind::PM;
  double worst_relative = 0.0;
  double worst_absolute = 0.0;
  std::size_t points = 0;  ///< non-degenerate lattice points evaluated
};

/// Worst-case small-signal errors for every kind pair with m_A = m_B = m over
/// biases {0, pi/6, pi/4, pi/3} on each side, Bob phases k*pi/4 (k = 0..7)
/// and link phases {0, 0.7}. Degenerate points are skipped.
std::vector<PairErrorSummary> small_signal_lattice(double m);

}  // namespace fcqkd
