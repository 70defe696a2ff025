#pragma once

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fcqkd/protocol.hpp"

namespace fcqkd {

struct ProtocolExpectation {
  bool feasible = false;
  std::string constraint;
  FailureReason reason = FailureReason::None;
};

/// Reference entry for one tandem configuration: closed-form theta and V = 1
/// index ratio as functions of (psi_A, psi_B), plus protocol verdicts.
struct Table2Expectation {
  ModulatorKind alice = ModulatorKind::PM;
  ModulatorKind bob = ModulatorKind::PM;
  std::string theta_label;
  std::string ratio_label;
  std::function<double(double, double)> theta;
  std::function<double(double, double)> ratio;
  ProtocolExpectation b92;
  ProtocolExpectation bb84;
  bool novel = false;  ///< configuration not covered by earlier tandem schemes
};

/// The nine reference rows, Alice-major in PM, AM, UM order.
std::vector<Table2Expectation> table2_reference();

/// Reference entry for a kind pair.
const Table2Expectation& table2_reference_row(ModulatorKind alice, ModulatorKind bob);

struct CellMismatch {
  std::string cell;  ///< e.g. "UM-PM.theta", "AM-AM.bb84.feasible"
  std::string detail;
};

struct Table2Comparison {
  std::vector<CellMismatch> mismatches;
  double max_theta_error = 0.0;      ///< over first-quadrant samples, modulo 2 pi
  double max_theta_error_mod_pi = 0.0;  ///< over all samples, modulo pi
  double max_ratio_rel_error = 0.0;
  std::size_t samples_checked = 0;
  std::size_t first_quadrant_samples = 0;

  bool ok() const noexcept { return mismatches.empty(); }
};

/// Tolerance for theta agreement [rad] and V = 1 ratio relative agreement.
inline constexpr double kTable2ThetaTolerance = 1e-9;
inline constexpr double kTable2RatioTolerance = 1e-9;

/// Compares regenerated rows against the reference.
///
/// The theta formulas assume positive real factors in kappa (biases in the
/// first quadrant); there they must hold modulo 2 pi. Elsewhere a sign flip
/// of cos/sin adds pi, so theta is checked modulo pi over the whole grid.
Table2Comparison compare_table2(std::span<const Table2Row> rows,
                                std::span<const Table2Expectation> reference);

std::string pair_label(ModulatorKind alice, ModulatorKind bob);

}  // namespace fcqkd
