#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fcqkd/table2_fixture.hpp"
#include "run_config.hpp"

namespace fcqkd::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitConfig = 2;

/// Version stamped into every JSON document as `schema_version`.
inline constexpr int kSchemaVersion = 1;

/// Largest modulation index accepted by `verify`.
inline constexpr double kVerifyMaxIndex = 0.2;

/// Bias grid size per axis for `table2`.
inline constexpr int kTable2GridPoints = 64;

struct SweepRow {
  double delta_phi = 0.0;
  double p_upper = 0.0;  ///< from the cascaded three-band field
  double p_lower = 0.0;
  double p_upper_closed = 0.0;  ///< from the closed-form fringe law
  double p_lower_closed = 0.0;
};

/// Sweeps Delta-Phi over [start, stop) in `steps` points by setting Bob's RF
/// phase to delta_phi + phi_A - link_phase - theta.
std::vector<SweepRow> sweep_rows(const RunConfig& cfg);

struct SpectrumLine {
  int harmonic = 0;
  double offset_ghz = 0.0;
  double power_db = 0.0;  ///< relative to the carrier line
};

/// Floor used for lines with zero power [dB].
inline constexpr double kSpectrumFloorDb = -400.0;

/// Carrier-to-strongest-line power ratio below which the carrier counts as suppressed.
inline constexpr double kSuppressedCarrierRatio = 1e-20;

/// Exact output spectrum at the requested Delta-Phi, in dB relative to the
/// carrier (relative to the strongest line when the carrier is suppressed).
std::vector<SpectrumLine> spectrum_lines(const RunConfig& cfg, double delta_phi,
                                         std::optional<int> order);

/// Modifies one reference cell (e.g. "UM-PM.theta", "AM-AM.bb84.feasible")
/// so the comparison must fail. Returns false for an unknown cell name.
bool perturb_reference(std::vector<Table2Expectation>& reference, const std::string& cell);

int cmd_sweep(const RunConfig& cfg, OutputFormat format, std::ostream& out, std::ostream& err);
int cmd_spectrum(const RunConfig& cfg, double delta_phi, std::optional<int> order,
                 OutputFormat format, std::ostream& out, std::ostream& err);
int cmd_table2(std::span<const Table2Expectation> reference, OutputFormat format,
               std::ostream& out, std::ostream& err);
int cmd_verify(double max_m, OutputFormat format, std::ostream& out, std::ostream& err);
int cmd_qkd(const RunConfig& cfg, OutputFormat format, std::ostream& out, std::ostream& err);

}  // namespace fcqkd::cli
