#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fcqkd/modulator.hpp"
#include "fcqkd/protocol.hpp"
#include "fcqkd/tandem_link.hpp"

namespace fcqkd {

/// Faint-pulse key-exchange session over a modeled tandem link.
struct SessionConfig {
  Protocol protocol = Protocol::BB84;
  ModulatorSpec alice;  ///< template; phi is overridden per pulse
  ModulatorSpec bob;    ///< template; phi is overridden per pulse
  LinkSpec link;
  /// Extra link phase that Bob does not compensate [rad]. Bob's phase offset
  /// is computed from link.link_phase; the pulses see link_phase + phase_mismatch.
  double phase_mismatch = 0.0;
  double mu = 0.1;      ///< mean photon number reaching the filter pair when P = 1
  double eta = 1.0;     ///< detector efficiency
  double p_dark = 0.0;  ///< dark-count probability per gate per counter
  std::uint64_t n_pulses = 100000;
  std::uint64_t seed = 1;

  /// Throws Error(InvalidParameter) or Error(InfeasibleProtocol).
  void validate() const;
};

struct SessionStats {
  std::uint64_t sent = 0;
  /// BB84: exactly one counter clicked. B92: at least one counter clicked.
  std::uint64_t conclusive = 0;
  std::uint64_t sifted_bits = 0;
  std::uint64_t errors = 0;
  std::uint64_t basis_mismatch = 0;  ///< BB84 pulses with different bases (always 0 for B92)
  std::uint64_t double_clicks = 0;
  std::uint64_t upper_clicks = 0;
  std::uint64_t lower_clicks = 0;
  std::optional<double> qber;  ///< errors / sifted_bits; empty when nothing was sifted

  friend bool operator==(const SessionStats&, const SessionStats&) = default;
};

/// Runs a session. Pulses are generated sequentially from a std::mt19937_64
/// seeded with cfg.seed, so a given config always produces the same stats.
///
/// BB84: Alice sends phi_A in {0, pi} (basis 0) or {pi/2, 3pi/2} (basis 1),
/// Bob measures with phi_B in {0, pi/2}; an upper click reads bit 0, a lower
/// click bit 1, and double clicks are discarded.
/// B92: Alice sends phi_A in {0, pi/2} for bits {0, 1}; Bob uses
/// phi_B in {pi, 3pi/2}; a click with pi reads bit 1, with 3pi/2 bit 0.
/// Click probability per counter is 1 - exp(-eta mu P) OR-ed with dark counts.
SessionStats run_session(const SessionConfig& cfg);

struct OffsetQber {
  double offset = 0.0;
  SessionStats stats;
};

/// Seed used for the session at position `index` of an offset sweep.
std::uint64_t offset_seed(std::uint64_t seed, std::size_t index);

/// One session per offset, each with phase_mismatch set to that offset and
/// its own stream seeded by offset_seed(cfg.seed, index).
std::vector<OffsetQber> qber_vs_offset(const SessionConfig& cfg, std::span<const double> offsets);

}  // namespace fcqkd
