#include "fcqkd/montecarlo.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "fcqkd/error.hpp"

namespace fcqkd {

namespace {

constexpr double kPi = std::numbers::pi;

struct ClickProbabilities {
  double upper = 0.0;
  double lower = 0.0;
};

double click_probability(double eta, double mu, double power, double p_dark) {
  const double photon = 1.0 - std::exp(-eta * mu * power);
  return 1.0 - (1.0 - photon) * (1.0 - p_dark);
}

// Click probabilities for Alice phase index `a` and Bob phase index `b`.
class ClickTable {
 public:
  ClickTable(const SessionConfig& cfg, std::span<const double> alice_phases,
             std::span<const double> bob_phases, double bob_offset) {
    const LinkSpec actual = cfg.link.with_link_phase(cfg.link.link_phase + cfg.phase_mismatch);
    for (std::size_t a = 0; a < alice_phases.size(); ++a) {
      for (std::size_t b = 0; b < bob_phases.size(); ++b) {
        const auto p = sideband_powers(cfg.alice.with_phi(alice_phases[a]),
                                       cfg.bob.with_phi(bob_phases[b] + bob_offset), actual);
        table_[a][b] = {click_probability(cfg.eta, cfg.mu, p.upper, cfg.p_dark),
                        click_probability(cfg.eta, cfg.mu, p.lower, cfg.p_dark)};
      }
    }
  }

  const ClickProbabilities& at(std::size_t a, std::size_t b) const { return table_[a][b]; }

 private:
  std::array<std::array<ClickProbabilities, 2>, 4> table_{};
};

}  // namespace

std::uint64_t offset_seed(std::uint64_t seed, std::size_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::array<std::uint32_t, 2> words{};
  seq.generate(words.begin(), words.end());
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

void SessionConfig::validate() const {
  link.validate();
  if (!(mu >= 0.0) || !std::isfinite(mu)) {
    throw Error(ErrorKind::InvalidParameter, "mu must be finite and >= 0");
  }
  if (!(eta >= 0.0 && eta <= 1.0)) throw Error(ErrorKind::InvalidParameter, "eta must lie in [0, 1]");
  if (!(p_dark >= 0.0 && p_dark < 1.0)) {
    throw Error(ErrorKind::InvalidParameter, "p_dark must lie in [0, 1)");
  }
  if (n_pulses == 0) throw Error(ErrorKind::InvalidParameter, "n_pulses must be > 0");
  if (!std::isfinite(phase_mismatch)) {
    throw Error(ErrorKind::InvalidParameter, "phase_mismatch must be finite");
  }

  const auto feasibility = check_protocol(protocol, alice, bob);
  if (!feasibility.feasible) {
    throw Error(ErrorKind::InfeasibleProtocol,
                std::string(to_string(protocol)) + " not feasible for " +
                    std::string(to_string(alice.kind)) + "-" + std::string(to_string(bob.kind)) +
                    " at these biases: " + std::string(to_string(feasibility.failure_reason)) +
                    " (requires " + feasibility.bias_constraint + ")");
  }
}

SessionStats run_session(const SessionConfig& cfg) {
  cfg.validate();

  const TandemResult tandem = analyze_tandem(cfg.alice, cfg.bob);
  const double offset = bob_phase_offset(cfg.link.link_phase, tandem.theta.value_or(0.0));

  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  auto coin = [&] { return uniform(rng) < 0.5 ? 0U : 1U; };

  SessionStats stats;
  stats.sent = cfg.n_pulses;

  auto record_clicks = [&](bool up, bool low) {
    stats.upper_clicks += up;
    stats.lower_clicks += low;
    stats.double_clicks += (up && low);
  };

  if (cfg.protocol == Protocol::BB84) {
    // index = 2 * basis + bit
    constexpr std::array<double, 4> alice_phases{0.0, kPi, kPi / 2, 3 * kPi / 2};
    constexpr std::array<double, 2> bob_phases{0.0, kPi / 2};
    const ClickTable table(cfg, alice_phases, bob_phases, offset);

    for (std::uint64_t i = 0; i < cfg.n_pulses; ++i) {
      const unsigned basis = coin();
      const unsigned bit = coin();
      const unsigned bob_basis = coin();
      const auto& p = table.at(2 * basis + bit, bob_basis);
      const bool up = uniform(rng) < p.upper;
      const bool low = uniform(rng) < p.lower;
      record_clicks(up, low);

      if (basis != bob_basis) ++stats.basis_mismatch;
      if (up == low) continue;  // no click or double click
      ++stats.conclusive;
      if (basis != bob_basis) continue;
      ++stats.sifted_bits;
      const unsigned bob_bit = up ? 0U : 1U;
      if (bob_bit != bit) ++stats.errors;
    }
  } else {
    constexpr std::array<double, 2> alice_phases{0.0, kPi / 2};
    constexpr std::array<double, 2> bob_phases{kPi, 3 * kPi / 2};
    const ClickTable table(cfg, alice_phases, bob_phases, offset);

    for (std::uint64_t i = 0; i < cfg.n_pulses; ++i) {
      const unsigned bit = coin();
      const unsigned bob_choice = coin();
      const auto& p = table.at(bit, bob_choice);
      const bool up = uniform(rng) < p.upper;
      const bool low = uniform(rng) < p.lower;
      record_clicks(up, low);

      if (!up && !low) continue;
      ++stats.conclusive;
      ++stats.sifted_bits;
      const unsigned bob_bit = bob_choice == 0 ? 1U : 0U;
      if (bob_bit != bit) ++stats.errors;
    }
  }

  if (stats.sifted_bits > 0) {
    stats.qber = static_cast<double>(stats.errors) / static_cast<double>(stats.sifted_bits);
  }
  return stats;
}

std::vector<OffsetQber> qber_vs_offset(const SessionConfig& cfg, std::span<const double> offsets) {
  std::vector<OffsetQber> out;
  out.reserve(offsets.size());
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    SessionConfig shifted = cfg;
    shifted.phase_mismatch = offsets[i];
    shifted.seed = offset_seed(cfg.seed, i);
    out.push_back({offsets[i], run_session(shifted)});
  }
  return out;
}

}  // namespace fcqkd
