#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fcqkd/modulator.hpp"

namespace fcqkd {

enum class Protocol { B92, BB84 };

enum class FailureReason { None, ThetaMismatch, ZeroVisibility };

std::string_view to_string(Protocol protocol);
std::string_view to_string(FailureReason reason);
std::optional<Protocol> parse_protocol(std::string_view text);

/// Tolerance on the modular theta conditions [rad].
inline constexpr double kThetaTolerance = 1e-9;

/// Bias-constraint labels used in protocol verdicts.
namespace constraint {
inline constexpr std::string_view kAny = "any";
inline constexpr std::string_view kNone = "none";
inline constexpr std::string_view kPsiAMultiplePi = "psi_A = n*pi";
inline constexpr std::string_view kPsiBMultiplePi = "psi_B = n*pi";
inline constexpr std::string_view kPsiAOddHalfPi = "psi_A = (2n+1)*pi/2";
inline constexpr std::string_view kPsiBOddHalfPi = "psi_B = (2n+1)*pi/2";
inline constexpr std::string_view kPsiBEqualsPsiAPlusNPi = "psi_B = psi_A + n*pi";
inline constexpr std::string_view kPsiBEqualsPsiAPlusOddHalfPi = "psi_B = psi_A + (2n+1)*pi/2";
}  // namespace constraint

struct ProtocolFeasibility {
  Protocol protocol = Protocol::B92;
  bool feasible = false;
  /// Bias family for the kind pair: where the protocol works when the pair
  /// supports it, where the theta condition forces a vanishing kappa for a
  /// zero-visibility pair, otherwise "none".
  std::string bias_constraint;
  /// m_A / m_B giving unit visibility at the evaluated biases (feasible only).
  std::optional<double> index_ratio;
  FailureReason failure_reason = FailureReason::None;
};

/// Delta-Phi = phi_B - phi_A + link_phase + theta, wrapped to [0, 2 pi).
double delta_phi(double phi_a, double phi_b, double link_phase, double theta);

/// True when `theta` meets the protocol's condition (n*pi for B92,
/// (2m+1)*pi/2 for BB84) within kThetaTolerance.
bool theta_condition_holds(Protocol protocol, double theta);

/// m_A / m_B that equalizes |kappa0| and |kappa1| at the given biases, or
/// empty when either kappa vanishes for unit indices.
std::optional<double> required_index_ratio(const ModulatorSpec& alice, const ModulatorSpec& bob);

/// Feasibility of a protocol for the given modulators at their current biases.
/// The indices only matter through their pattern; V = 1 is assumed reachable
/// by choosing m_A / m_B.
ProtocolFeasibility check_protocol(Protocol protocol, const ModulatorSpec& alice,
                                   const ModulatorSpec& bob);
ProtocolFeasibility check_b92(const ModulatorSpec& alice, const ModulatorSpec& bob);
ProtocolFeasibility check_bb84(const ModulatorSpec& alice, const ModulatorSpec& bob);

struct BiasSample {
  double psi_a = 0.0;
  double psi_b = 0.0;
  std::optional<double> theta;        ///< empty when a kappa vanishes
  std::optional<double> index_ratio;  ///< m_A / m_B for V = 1
};

struct PairVerdict {
  ProtocolFeasibility verdict;
  /// A bias pair at which the verdict was established (first feasible point,
  /// or first zero-visibility point for that failure).
  std::optional<std::pair<double, double>> witness_bias;
};

/// One row of the tandem configuration table.
struct Table2Row {
  ModulatorKind alice_kind = ModulatorKind::PM;
  ModulatorKind bob_kind = ModulatorKind::PM;
  std::vector<BiasSample> samples;  ///< theta and V = 1 ratio over psi_grid x psi_grid
  PairVerdict b92;
  PairVerdict bb84;
};

/// Evaluates a kind pair over the bias grid plus the special biases k*pi/2
/// (k in -4..4) and the relative offsets psi_B = psi_A + k*pi/2, and infers
/// the bias family on which each protocol works or fails.
Table2Row classify_pair(ModulatorKind alice_kind, ModulatorKind bob_kind,
                        std::span<const double> psi_grid);

/// `points` biases (i + 1/2) * pi / points, i = 0..points-1, in (0, pi).
/// Avoids 0, pi/2 and pi for even `points`.
std::vector<double> default_psi_grid(int points = 64);

/// All nine kind pairs in the order PM, AM, UM for Alice, then Bob.
std::vector<Table2Row> regenerate_table2(std::span<const double> psi_grid);

struct PhaseSetting {
  double phi_a = 0.0;
  double phi_b = 0.0;
  double delta_phi = 0.0;  ///< achieved Delta-Phi in [0, 2 pi)
};

/// Offset Bob adds to his nominal RF phase so that Delta-Phi = phi_B_nominal - phi_A.
double bob_phase_offset(double link_phase, double theta);

/// Alice/Bob settings drawn from {0, pi/2, pi, 3pi/2}, with Bob's offset
/// applied, covering every canonical Delta-Phi. Throws InfeasibleProtocol
/// when theta does not meet the protocol condition.
std::vector<PhaseSetting> phase_alphabet(Protocol protocol, double link_phase, double theta);

}  // namespace fcqkd
