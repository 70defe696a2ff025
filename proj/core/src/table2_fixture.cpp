#include "fcqkd/table2_fixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "fcqkd/error.hpp"
#include "fcqkd/tandem_link.hpp"

namespace fcqkd {

namespace {

constexpr double kPi = std::numbers::pi;

using K = ModulatorKind;
using F = FailureReason;

ProtocolExpectation ok(std::string_view constraint) {
  return {true, std::string(constraint), F::None};
}
ProtocolExpectation no_theta() { return {false, std::string(constraint::kNone), F::ThetaMismatch}; }
ProtocolExpectation no_zero_vis(std::string_view constraint) {
  return {false, std::string(constraint), F::ZeroVisibility};
}

std::string format_double(double value) {
  std::ostringstream os;
  os.precision(15);
  os << value;
  return os.str();
}

void compare_protocol(const std::string& prefix, const ProtocolFeasibility& got,
                      const ProtocolExpectation& want, std::vector<CellMismatch>& out) {
  if (got.feasible != want.feasible) {
    out.push_back({prefix + ".feasible", std::string("expected ") + (want.feasible ? "OK" : "NO") +
                                             ", got " + (got.feasible ? "OK" : "NO")});
  }
  if (got.bias_constraint != want.constraint) {
    out.push_back({prefix + ".constraint",
                   "expected '" + want.constraint + "', got '" + got.bias_constraint + "'"});
  }
  if (got.failure_reason != want.reason) {
    out.push_back({prefix + ".reason", "expected " + std::string(to_string(want.reason)) +
                                           ", got " + std::string(to_string(got.failure_reason))});
  }
}

}  // namespace

std::string pair_label(ModulatorKind alice, ModulatorKind bob) {
  return std::string(to_string(alice)) + "-" + std::string(to_string(bob));
}

std::vector<Table2Expectation> table2_reference() {
  using std::abs;
  using std::cos;
  using std::tan;
  std::vector<Table2Expectation> rows;
  rows.reserve(9);

  rows.push_back({K::PM, K::PM, "0", "1",
                  [](double, double) { return 0.0; },
                  [](double, double) { return 1.0; },
                  ok(constraint::kAny), no_theta(), false});
  rows.push_back({K::PM, K::AM, "pi/2", "|tan(psi_B)|",
                  [](double, double) { return kPi / 2; },
                  [](double, double b) { return abs(tan(b)); },
                  no_theta(), ok(constraint::kAny), false});
  rows.push_back({K::PM, K::UM, "psi_B", "1/(2|cos(psi_B)|)",
                  [](double, double b) { return b; },
                  [](double, double b) { return 1.0 / (2.0 * abs(cos(b))); },
                  ok(constraint::kPsiBMultiplePi), no_zero_vis(constraint::kPsiBOddHalfPi), true});
  rows.push_back({K::AM, K::PM, "-pi/2", "1/|tan(psi_A)|",
                  [](double, double) { return -kPi / 2; },
                  [](double a, double) { return 1.0 / abs(tan(a)); },
                  no_theta(), ok(constraint::kAny), false});
  rows.push_back({K::AM, K::AM, "0", "|tan(psi_B)/tan(psi_A)|",
                  [](double, double) { return 0.0; },
                  [](double a, double b) { return abs(tan(b) / tan(a)); },
                  ok(constraint::kAny), no_theta(), false});
  // The V = 1 ratio is the reciprocal of the UM-AM ratio with the two roles
  // exchanged: |kappa0| = m_A |sin(psi_A) cos(psi_B)|, |kappa1| = m_B |cos(psi_A)| / 2.
  rows.push_back({K::AM, K::UM, "-pi/2 + psi_B", "1/(2|tan(psi_A) cos(psi_B)|)",
                  [](double, double b) { return -kPi / 2 + b; },
                  [](double a, double b) { return 1.0 / (2.0 * abs(tan(a) * cos(b))); },
                  no_zero_vis(constraint::kPsiBOddHalfPi), ok(constraint::kPsiBMultiplePi), true});
  rows.push_back({K::UM, K::PM, "-psi_A", "2|cos(psi_A)|",
                  [](double a, double) { return -a; },
                  [](double a, double) { return 2.0 * abs(cos(a)); },
                  ok(constraint::kPsiAMultiplePi), no_zero_vis(constraint::kPsiAOddHalfPi), true});
  rows.push_back({K::UM, K::AM, "pi/2 - psi_A", "2|cos(psi_A) tan(psi_B)|",
                  [](double a, double) { return kPi / 2 - a; },
                  [](double a, double b) { return 2.0 * abs(cos(a) * tan(b)); },
                  no_zero_vis(constraint::kPsiAOddHalfPi), ok(constraint::kPsiAMultiplePi), true});
  rows.push_back({K::UM, K::UM, "psi_B - psi_A", "|cos(psi_A)/cos(psi_B)|",
                  [](double a, double b) { return b - a; },
                  [](double a, double b) { return abs(cos(a) / cos(b)); },
                  ok(constraint::kPsiBEqualsPsiAPlusNPi),
                  ok(constraint::kPsiBEqualsPsiAPlusOddHalfPi), false});
  return rows;
}

const Table2Expectation& table2_reference_row(ModulatorKind alice, ModulatorKind bob) {
  static const std::vector<Table2Expectation> rows = table2_reference();
  for (const auto& row : rows) {
    if (row.alice == alice && row.bob == bob) return row;
  }
  throw Error(ErrorKind::InvalidParameter, "no reference row for " + pair_label(alice, bob));
}

Table2Comparison compare_table2(std::span<const Table2Row> rows,
                                std::span<const Table2Expectation> reference) {
  Table2Comparison result;
  if (rows.size() != 9) {
    result.mismatches.push_back({"table.rows", "expected 9 rows, got " + std::to_string(rows.size())});
  }

  for (const auto& want : reference) {
    const std::string label = pair_label(want.alice, want.bob);
    const Table2Row* got = nullptr;
    for (const auto& row : rows) {
      if (row.alice_kind == want.alice && row.bob_kind == want.bob) got = &row;
    }
    if (got == nullptr) {
      result.mismatches.push_back({label, "row missing"});
      continue;
    }

    double theta_err = 0.0;
    double theta_err_mod_pi = 0.0;
    double ratio_err = 0.0;
    bool theta_undefined = false;
    for (const auto& s : got->samples) {
      ++result.samples_checked;
      const double expected_theta = want.theta(s.psi_a, s.psi_b);
      if (!s.theta) {
        theta_undefined = true;
      } else {
        const double diff = *s.theta - expected_theta;
        theta_err_mod_pi = std::max(theta_err_mod_pi, std::abs(std::remainder(diff, kPi)));
        if (s.psi_a < kPi / 2 && s.psi_b < kPi / 2) {
          ++result.first_quadrant_samples;
          theta_err = std::max(theta_err, std::abs(wrap_pi(diff)));
        }
      }
      const double expected_ratio = want.ratio(s.psi_a, s.psi_b);
      if (!s.index_ratio) {
        ratio_err = std::max(ratio_err, std::numeric_limits<double>::infinity());
      } else {
        ratio_err = std::max(ratio_err, std::abs(*s.index_ratio - expected_ratio) / expected_ratio);
      }
    }
    result.max_theta_error = std::max(result.max_theta_error, theta_err);
    result.max_theta_error_mod_pi = std::max(result.max_theta_error_mod_pi, theta_err_mod_pi);
    result.max_ratio_rel_error = std::max(result.max_ratio_rel_error, ratio_err);

    if (theta_undefined) {
      result.mismatches.push_back({label + ".theta", "theta undefined at a grid point"});
    } else if (theta_err > kTable2ThetaTolerance || theta_err_mod_pi > kTable2ThetaTolerance) {
      result.mismatches.push_back({label + ".theta", "expected " + want.theta_label +
                                                         ", max error " + format_double(std::max(
                                                             theta_err, theta_err_mod_pi))});
    }
    if (!(ratio_err <= kTable2RatioTolerance)) {
      result.mismatches.push_back({label + ".ratio", "expected " + want.ratio_label +
                                                         ", max relative error " +
                                                         format_double(ratio_err)});
    }
    compare_protocol(label + ".b92", got->b92.verdict, want.b92, result.mismatches);
    compare_protocol(label + ".bb84", got->bb84.verdict, want.bb84, result.mismatches);
  }
  return result;
}

}  // namespace fcqkd
