#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "fcqkd/modulator.hpp"
#include "fcqkd/montecarlo.hpp"
#include "fcqkd/protocol.hpp"
#include "fcqkd/tandem_link.hpp"

namespace fcqkd::cli {

enum class OutputFormat { Csv, Json };

std::optional<OutputFormat> parse_output_format(std::string_view text);

/// Half-wave voltage of the bench modulators used by default [V].
double default_v_pi(ModulatorKind kind);

/// One modulator section. Exactly one of (v_rf_volts, m) and exactly one of
/// (v_dc_volts, psi) must be set.
struct ModulatorConfig {
  ModulatorKind kind = ModulatorKind::PM;
  double v_pi_volts = 7.4;
  std::optional<double> v_rf_volts;
  std::optional<double> m;
  std::optional<double> v_dc_volts;
  std::optional<double> psi;
  double phi = 0.0;

  double modulation_index() const;
  double bias_phase() const;
  ModulatorSpec to_spec() const;
};

struct RunConfig {
  struct Source {
    double wavelength_nm = 1550.0;  // metadata only
    double power_dbm = 5.0;         // metadata only
  } source;

  ModulatorConfig alice;
  ModulatorConfig bob;

  struct Link {
    double rf_ghz = 15.0;
    double link_phase_rad = 0.0;
    double loss = 1.0;
  } link;

  struct Sweep {
    std::string variable = "delta_phi";
    double start = 0.0;
    double stop = 6.283185307179586;
    int steps = 64;
  } sweep;

  struct MonteCarlo {
    Protocol protocol = Protocol::B92;
    double mu = 0.1;
    double eta = 1.0;
    double p_dark = 0.0;
    std::uint64_t n_pulses = 100000;
    std::uint64_t seed = 1;
    double phase_mismatch = 0.0;
  } montecarlo;

  struct Output {
    OutputFormat format = OutputFormat::Csv;
    std::string path = "-";
  } output;

  LinkSpec link_spec() const;
  SessionConfig session_config() const;
};

/// UM (Alice, null bias) followed by PM (Bob) with m_A = 2 m_B, 15 GHz drive,
/// B92 session defaults.
RunConfig default_run_config();

/// Parses INI-style `[section]` / `key = value` text on top of the defaults.
/// A modulator section replaces the default modulator entirely. Unknown
/// sections or keys, conflicting pairs and unparsable values throw
/// Error(ErrorKind::Config).
RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace fcqkd::cli
