#include "fcqkd/exact_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>

#include "fcqkd/error.hpp"

namespace fcqkd {

namespace {

constexpr double kSeriesRelativeCutoff = 1e-16;
constexpr double kTailEnergyLimit = 1e-12;

// j^k for integer k.
ComplexAmplitude j_power(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

std::string format_number(double x) {
  std::ostringstream os;
  os << x;
  return os.str();
}

}  // namespace

double bessel_j(int k, double x) {
  if (!(std::abs(x) <= kBesselMaxArgument)) {
    throw Error(ErrorKind::OutOfDomain,
                "bessel_j argument " + format_number(x) + " outside |x| <= 1.5");
  }
  if (k < 0) {
    const double value = bessel_j(-k, x);
    return (k % 2 == 0) ? value : -value;
  }

  const double half = 0.5 * x;
  // Leading term (x/2)^k / k!
  double term = 1.0;
  for (int i = 1; i <= k; ++i) term *= half / i;

  double sum = term;
  const double half_sq = half * half;
  for (int s = 1; s < 200; ++s) {
    term *= -half_sq / (static_cast<double>(s) * (s + k));
    sum += term;
    if (std::abs(term) <= kSeriesRelativeCutoff * std::abs(sum)) break;
  }
  return sum;
}

HarmonicSpectrum::HarmonicSpectrum(int order)
    : order_(order), amps_(static_cast<std::size_t>(2 * order + 1)) {
  if (order < 0) throw Error(ErrorKind::InvalidParameter, "harmonic order must be >= 0");
}

ComplexAmplitude& HarmonicSpectrum::at(int k) {
  if (k < -order_ || k > order_) {
    throw Error(ErrorKind::InvalidParameter, "harmonic index outside the spectrum");
  }
  return amps_[static_cast<std::size_t>(k + order_)];
}

const ComplexAmplitude& HarmonicSpectrum::at(int k) const {
  if (k < -order_ || k > order_) {
    throw Error(ErrorKind::InvalidParameter, "harmonic index outside the spectrum");
  }
  return amps_[static_cast<std::size_t>(k + order_)];
}

ComplexAmplitude HarmonicSpectrum::amplitude(int k) const noexcept {
  if (k < -order_ || k > order_) return {};
  return amps_[static_cast<std::size_t>(k + order_)];
}

double HarmonicSpectrum::total_power() const noexcept {
  double sum = 0.0;
  for (const auto& a : amps_) sum += std::norm(a);
  return sum;
}

int default_harmonic_order(double max_index) {
  return static_cast<int>(std::ceil(3.0 * max_index)) + 8;
}

HarmonicSpectrum exact_modulator_spectrum(const ModulatorSpec& mod, int order) {
  if (order < 3.0 * mod.max_index() + 5.0) {
    throw Error(ErrorKind::TruncationRisk,
                "harmonic order " + std::to_string(order) + " too small for index " +
                    format_number(mod.max_index()));
  }

  // exp(+j m cos x) = sum_k j^k J_k(m) e^{j k x}; the lower arm uses -m.
  const ComplexAmplitude up_arm = mod.eps1 * std::polar(1.0, mod.psi);
  const ComplexAmplitude down_arm = mod.eps2 * std::polar(1.0, -mod.psi);

  HarmonicSpectrum spectrum(order);
  for (int k = -order; k <= order; ++k) {
    ComplexAmplitude arms{};
    if (mod.eps1 != 0.0) arms += up_arm * bessel_j(k, mod.m1);
    if (mod.eps2 != 0.0) arms += down_arm * bessel_j(k, -mod.m2);
    spectrum.at(k) = j_power(k) * arms * std::polar(1.0, k * mod.phi);
  }
  return spectrum;
}

HarmonicSpectrum exact_tandem_spectrum(const ModulatorSpec& alice, const ModulatorSpec& bob,
                                       const LinkSpec& link, int order) {
  const HarmonicSpectrum a = exact_modulator_spectrum(alice, order);
  const HarmonicSpectrum b = exact_modulator_spectrum(bob, order);
  const double amplitude = std::sqrt(link.loss);

  const int full = 2 * order;
  HarmonicSpectrum product(full);
  for (int k = -order; k <= order; ++k) {
    const ComplexAmplitude delayed = amplitude * a.at(k) * std::polar(1.0, -k * link.link_phase);
    if (delayed == ComplexAmplitude{}) continue;
    for (int l = -order; l <= order; ++l) product.at(k + l) += delayed * b.at(l);
  }

  double tail = 0.0;
  for (int n = -full; n <= full; ++n) {
    if (n < -order || n > order) tail += std::norm(product.at(n));
  }
  if (tail > kTailEnergyLimit) {
    throw Error(ErrorKind::TruncationRisk,
                "tail energy " + format_number(tail) + " beyond harmonic " + std::to_string(order));
  }

  HarmonicSpectrum out(order);
  for (int n = -order; n <= order; ++n) out.at(n) = product.at(n);
  return out;
}

SmallSignalError small_signal_error(const ModulatorSpec& alice, const ModulatorSpec& bob,
                                    const LinkSpec& link) {
  const TandemResult tandem = analyze_tandem(alice, bob);
  const SidebandPowers approx = sideband_powers(alice, bob, link);

  const int order = default_harmonic_order(std::max(alice.max_index(), bob.max_index()));
  const HarmonicSpectrum exact = exact_tandem_spectrum(alice, bob, link, order);

  // Exact counterpart of 2 loss (|kappa0|^2 + |kappa1|^2): carrier and
  // first-harmonic amplitudes of each modulator taken from its exact spectrum.
  const HarmonicSpectrum a = exact_modulator_spectrum(alice, order);
  const HarmonicSpectrum b = exact_modulator_spectrum(bob, order);
  const double exact_norm = std::norm(b.at(0)) * std::norm(a.at(1)) +
                            std::norm(a.at(0)) * std::norm(b.at(1));
  if (exact_norm == 0.0 || tandem.norm == 0.0) {
    throw Error(ErrorKind::DegenerateConfiguration, "no first-order sideband light");
  }
  const double scale = 2.0 * link.loss * exact_norm;
  const double exact_upper = std::norm(exact.amplitude(1)) / scale;
  const double exact_lower = std::norm(exact.amplitude(-1)) / scale;

  SmallSignalError err;
  err.upper_absolute = approx.upper < kZeroPowerFloor;
  err.lower_absolute = approx.lower < kZeroPowerFloor;
  err.upper = std::abs(exact_upper - approx.upper) / (err.upper_absolute ? 1.0 : approx.upper);
  err.lower = std::abs(exact_lower - approx.lower) / (err.lower_absolute ? 1.0 : approx.lower);
  return err;
}

std::vector<PairErrorSummary> small_signal_lattice(double m) {
  constexpr double pi = std::numbers::pi;
  constexpr std::array<ModulatorKind, 3> kinds{ModulatorKind::PM, ModulatorKind::AM,
                                               ModulatorKind::UM};
  constexpr std::array<double, 4> biases{0.0, pi / 6, pi / 4, pi / 3};
  constexpr std::array<double, 2> link_phases{0.0, 0.7};

  std::vector<PairErrorSummary> out;
  for (auto ka : kinds) {
    for (auto kb : kinds) {
      PairErrorSummary summary{ka, kb};
      for (double psi_a : biases) {
        for (double psi_b : biases) {
          for (int step = 0; step < 8; ++step) {
            for (double link_phase : link_phases) {
              const auto alice = make_modulator(ka, m, psi_a, 0.0);
              const auto bob = make_modulator(kb, m, psi_b, step * pi / 4);
              LinkSpec link;
              link.link_phase = link_phase;
              SmallSignalError err;
              try {
                err = small_signal_error(alice, bob, link);
              } catch (const Error& e) {
                if (e.kind() == ErrorKind::DegenerateConfiguration) continue;
                throw;
              }
              ++summary.points;
              for (auto [value, absolute] : {std::pair{err.upper, err.upper_absolute},
                                             std::pair{err.lower, err.lower_absolute}}) {
                double& worst = absolute ? summary.worst_absolute : summary.worst_relative;
                worst = std::max(worst, value);
              }
            }
          }
        }
      }
      out.push_back(summary);
    }
  }
  return out;
}

}  // namespace fcqkd
