#include "fcqkd/protocol.hpp"

#include <array>
#include <cmath>
#include <functional>
#include <numbers>

#include "fcqkd/error.hpp"
#include "fcqkd/tandem_link.hpp"

namespace fcqkd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kFamilyTolerance = 1e-9;
// Half-width of the symmetric bias perturbation used to take the theta limit
// at a vanishing kappa.
constexpr double kLimitStep = 1e-4;

constexpr std::array<ModulatorKind, 3> kKinds{ModulatorKind::PM, ModulatorKind::AM,
                                              ModulatorKind::UM};

// Distance of `angle` from `target` modulo `period`.
double modular_distance(double angle, double target, double period) {
  const double r = std::remainder(angle - target, period);
  return std::abs(r);
}

// Theta modulo pi for a point where one kappa vanishes: circular mean of
// 2*theta over biases shifted by +/- kLimitStep.
std::optional<double> limiting_theta(const ModulatorSpec& alice, const ModulatorSpec& bob) {
  double sum_re = 0.0;
  double sum_im = 0.0;
  for (double step : {-kLimitStep, kLimitStep}) {
    ModulatorSpec a = alice;
    ModulatorSpec b = bob;
    a.psi += step;
    b.psi += step;
    if (kappa0_vanishes(a, b) || kappa1_vanishes(a, b)) return std::nullopt;
    const auto k = kappa_factors(a, b);
    const double th = std::arg(k.kappa1) - std::arg(k.kappa0);
    sum_re += std::cos(2.0 * th);
    sum_im += std::sin(2.0 * th);
  }
  return 0.5 * std::atan2(sum_im, sum_re);
}

struct PointVerdict {
  bool feasible = false;
  FailureReason reason = FailureReason::ThetaMismatch;
  bool both_vanish = false;
  bool any_vanish = false;
  std::optional<double> ratio;
};

PointVerdict evaluate_point(Protocol protocol, const ModulatorSpec& alice_in,
                            const ModulatorSpec& bob_in) {
  const ModulatorSpec alice = alice_in.with_index(1.0);
  const ModulatorSpec bob = bob_in.with_index(1.0);

  PointVerdict out;
  const bool zero0 = kappa0_vanishes(alice, bob);
  const bool zero1 = kappa1_vanishes(alice, bob);
  out.any_vanish = zero0 || zero1;
  out.both_vanish = zero0 && zero1;

  if (out.both_vanish) {
    out.reason = FailureReason::ZeroVisibility;
    return out;
  }
  if (out.any_vanish) {
    const auto limit = limiting_theta(alice, bob);
    out.reason = (limit && theta_condition_holds(protocol, *limit))
                     ? FailureReason::ZeroVisibility
                     : FailureReason::ThetaMismatch;
    return out;
  }

  const auto k = kappa_factors(alice, bob);
  const double th = theta(k.kappa0, k.kappa1);
  if (theta_condition_holds(protocol, th)) {
    out.feasible = true;
    out.reason = FailureReason::None;
    out.ratio = std::abs(k.kappa1) / std::abs(k.kappa0);
  }
  return out;
}

struct BiasFamily {
  std::string_view label;
  std::function<bool(double, double)> contains;
};

const std::vector<BiasFamily>& bias_families() {
  static const std::vector<BiasFamily> families = [] {
    auto near = [](double angle, double target, double period) {
      return modular_distance(angle, target, period) <= kFamilyTolerance;
    };
    return std::vector<BiasFamily>{
        {constraint::kAny, [](double, double) { return true; }},
        {constraint::kPsiAMultiplePi, [=](double a, double) { return near(a, 0.0, kPi); }},
        {constraint::kPsiBMultiplePi, [=](double, double b) { return near(b, 0.0, kPi); }},
        {constraint::kPsiAOddHalfPi, [=](double a, double) { return near(a, kPi / 2, kPi); }},
        {constraint::kPsiBOddHalfPi, [=](double, double b) { return near(b, kPi / 2, kPi); }},
        {constraint::kPsiBEqualsPsiAPlusNPi,
         [=](double a, double b) { return near(b - a, 0.0, kPi); }},
        {constraint::kPsiBEqualsPsiAPlusOddHalfPi,
         [=](double a, double b) { return near(b - a, kPi / 2, kPi); }},
    };
  }();
  return families;
}

struct Candidate {
  double psi_a;
  double psi_b;
  PointVerdict verdict;
};

std::vector<std::pair<double, double>> candidate_biases(std::span<const double> psi_grid) {
  std::vector<double> axis(psi_grid.begin(), psi_grid.end());
  for (int k = -4; k <= 4; ++k) axis.push_back(k * kPi / 2);

  std::vector<std::pair<double, double>> out;
  out.reserve(axis.size() * (axis.size() + 9));
  for (double a : axis) {
    for (double b : axis) out.emplace_back(a, b);
    for (int k = -4; k <= 4; ++k) out.emplace_back(a, a + k * kPi / 2);
  }
  return out;
}

// Picks the most general family that contains every point of `hits` and whose
// other members are all explained (in `hits`, or excusable via `excused`).
std::string infer_family(const std::vector<Candidate>& candidates,
                         const std::function<bool(const Candidate&)>& hit,
                         const std::function<bool(const Candidate&)>& excused) {
  for (const auto& family : bias_families()) {
    bool fits = true;
    for (const auto& c : candidates) {
      const bool in_family = family.contains(c.psi_a, c.psi_b);
      const bool is_hit = hit(c);
      if ((is_hit && !in_family) || (in_family && !is_hit && !excused(c))) {
        fits = false;
        break;
      }
    }
    if (fits) return std::string(family.label);
  }
  return "unclassified";
}

PairVerdict classify_protocol(Protocol protocol, ModulatorKind alice_kind,
                              ModulatorKind bob_kind,
                              const std::vector<std::pair<double, double>>& biases) {
  std::vector<Candidate> candidates;
  candidates.reserve(biases.size());
  for (const auto& [a, b] : biases) {
    candidates.push_back({a, b,
                          evaluate_point(protocol, make_modulator(alice_kind, 1.0, a, 0.0),
                                         make_modulator(bob_kind, 1.0, b, 0.0))});
  }

  PairVerdict out;
  out.verdict.protocol = protocol;

  auto is_feasible = [](const Candidate& c) { return c.verdict.feasible; };
  auto is_zero_vis = [](const Candidate& c) {
    return !c.verdict.both_vanish && c.verdict.reason == FailureReason::ZeroVisibility;
  };

  for (const auto& c : candidates) {
    if (is_feasible(c)) {
      out.verdict.feasible = true;
      out.verdict.failure_reason = FailureReason::None;
      out.verdict.index_ratio = c.verdict.ratio;
      out.witness_bias = std::pair{c.psi_a, c.psi_b};
      break;
    }
  }

  if (out.verdict.feasible) {
    out.verdict.bias_constraint = infer_family(
        candidates, is_feasible, [](const Candidate& c) { return c.verdict.any_vanish; });
    return out;
  }

  for (const auto& c : candidates) {
    if (is_zero_vis(c)) {
      out.verdict.failure_reason = FailureReason::ZeroVisibility;
      out.witness_bias = std::pair{c.psi_a, c.psi_b};
      break;
    }
  }
  if (out.verdict.failure_reason == FailureReason::ZeroVisibility) {
    out.verdict.bias_constraint = infer_family(
        candidates, is_zero_vis, [](const Candidate& c) { return c.verdict.both_vanish; });
  } else {
    out.verdict.failure_reason = FailureReason::ThetaMismatch;
    out.verdict.bias_constraint = std::string(constraint::kNone);
  }
  return out;
}

std::size_t kind_index(ModulatorKind kind) { return static_cast<std::size_t>(kind); }

// Per-pair bias families over the default grid, computed once.
const std::string& pair_constraint(Protocol protocol, ModulatorKind alice, ModulatorKind bob) {
  static const auto table = [] {
    std::array<std::array<std::array<std::string, 3>, 3>, 2> t;
    const auto biases = candidate_biases(default_psi_grid(16));
    for (auto p : {Protocol::B92, Protocol::BB84}) {
      for (auto a : kKinds) {
        for (auto b : kKinds) {
          t[static_cast<std::size_t>(p)][kind_index(a)][kind_index(b)] =
              classify_protocol(p, a, b, biases).verdict.bias_constraint;
        }
      }
    }
    return t;
  }();
  return table[static_cast<std::size_t>(protocol)][kind_index(alice)][kind_index(bob)];
}

}  // namespace

std::string_view to_string(Protocol protocol) {
  return protocol == Protocol::B92 ? "B92" : "BB84";
}

std::string_view to_string(FailureReason reason) {
  switch (reason) {
    case FailureReason::None: return "none";
    case FailureReason::ThetaMismatch: return "theta-mismatch";
    case FailureReason::ZeroVisibility: return "zero-visibility";
  }
  return "none";
}

std::optional<Protocol> parse_protocol(std::string_view text) {
  if (text == "B92" || text == "b92") return Protocol::B92;
  if (text == "BB84" || text == "bb84") return Protocol::BB84;
  return std::nullopt;
}

double delta_phi(double phi_a, double phi_b, double link_phase, double theta) {
  return wrap_two_pi(phi_b - phi_a + link_phase + theta);
}

bool theta_condition_holds(Protocol protocol, double theta) {
  const double target = protocol == Protocol::B92 ? 0.0 : kPi / 2;
  return modular_distance(theta, target, kPi) <= kThetaTolerance;
}

std::optional<double> required_index_ratio(const ModulatorSpec& alice, const ModulatorSpec& bob) {
  const ModulatorSpec a = alice.with_index(1.0);
  const ModulatorSpec b = bob.with_index(1.0);
  if (kappa0_vanishes(a, b) || kappa1_vanishes(a, b)) return std::nullopt;
  const auto k = kappa_factors(a, b);
  return std::abs(k.kappa1) / std::abs(k.kappa0);
}

ProtocolFeasibility check_protocol(Protocol protocol, const ModulatorSpec& alice,
                                   const ModulatorSpec& bob) {
  const PointVerdict point = evaluate_point(protocol, alice, bob);
  ProtocolFeasibility out;
  out.protocol = protocol;
  out.feasible = point.feasible;
  out.failure_reason = point.reason;
  out.index_ratio = point.ratio;
  out.bias_constraint = pair_constraint(protocol, alice.kind, bob.kind);
  return out;
}

ProtocolFeasibility check_b92(const ModulatorSpec& alice, const ModulatorSpec& bob) {
  return check_protocol(Protocol::B92, alice, bob);
}

ProtocolFeasibility check_bb84(const ModulatorSpec& alice, const ModulatorSpec& bob) {
  return check_protocol(Protocol::BB84, alice, bob);
}

std::vector<double> default_psi_grid(int points) {
  if (points <= 0) throw Error(ErrorKind::InvalidParameter, "psi grid needs at least one point");
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) grid[static_cast<std::size_t>(i)] = (i + 0.5) * kPi / points;
  return grid;
}

Table2Row classify_pair(ModulatorKind alice_kind, ModulatorKind bob_kind,
                        std::span<const double> psi_grid) {
  if (psi_grid.empty()) throw Error(ErrorKind::InvalidParameter, "psi grid is empty");

  Table2Row row;
  row.alice_kind = alice_kind;
  row.bob_kind = bob_kind;
  row.samples.reserve(psi_grid.size() * psi_grid.size());
  for (double a : psi_grid) {
    for (double b : psi_grid) {
      const auto alice = make_modulator(alice_kind, 1.0, a, 0.0);
      const auto bob = make_modulator(bob_kind, 1.0, b, 0.0);
      BiasSample sample{a, b, std::nullopt, required_index_ratio(alice, bob)};
      if (!kappa0_vanishes(alice, bob) && !kappa1_vanishes(alice, bob)) {
        const auto k = kappa_factors(alice, bob);
        sample.theta = theta(k.kappa0, k.kappa1);
      }
      row.samples.push_back(sample);
    }
  }

  const auto biases = candidate_biases(psi_grid);
  row.b92 = classify_protocol(Protocol::B92, alice_kind, bob_kind, biases);
  row.bb84 = classify_protocol(Protocol::BB84, alice_kind, bob_kind, biases);
  return row;
}

std::vector<Table2Row> regenerate_table2(std::span<const double> psi_grid) {
  std::vector<Table2Row> rows;
  rows.reserve(9);
  for (auto a : kKinds) {
    for (auto b : kKinds) rows.push_back(classify_pair(a, b, psi_grid));
  }
  return rows;
}

double bob_phase_offset(double link_phase, double theta) {
  return -(link_phase + theta);
}

std::vector<PhaseSetting> phase_alphabet(Protocol protocol, double link_phase, double theta) {
  if (!theta_condition_holds(protocol, theta)) {
    throw Error(ErrorKind::InfeasibleProtocol,
                std::string(to_string(protocol)) + " requires theta = " +
                    (protocol == Protocol::B92 ? "n*pi" : "(2m+1)*pi/2"));
  }
  constexpr std::array<double, 4> canonical{0.0, kPi / 2, kPi, 3 * kPi / 2};
  const double offset = bob_phase_offset(link_phase, theta);

  std::vector<PhaseSetting> out;
  out.reserve(16);
  for (double a : canonical) {
    for (double b : canonical) {
      const double phi_b = wrap_two_pi(b + offset);
      out.push_back({a, phi_b, delta_phi(a, phi_b, link_phase, theta)});
    }
  }
  return out;
}

}  // namespace fcqkd
