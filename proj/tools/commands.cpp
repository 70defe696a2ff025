#include "commands.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>
#include <sstream>

#include "fcqkd/error.hpp"
#include "fcqkd/exact_oracle.hpp"
#include "json.hpp"

namespace fcqkd::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr int kCsvPrecision = 15;

json document(const char* command) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = command;
  return doc;
}

void write_json(std::ostream& out, const json& doc) { out << doc.dump(2) << '\n'; }

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {
    out_ << std::setprecision(kCsvPrecision);
  }

  template <typename... Ts>
  void row(const Ts&... values) {
    bool first = true;
    ((out_ << (first ? "" : ",") << values, first = false), ...);
    out_ << '\n';
  }

 private:
  std::ostream& out_;
};

void warn_low_modulation(const RunConfig& cfg, std::ostream& err) {
  for (const auto& [name, mod] : {std::pair{"alice", &cfg.alice}, std::pair{"bob", &cfg.bob}}) {
    const double m = mod->modulation_index();
    if (m > kLowModulationLimit) {
      err << "warning: " << name << " modulation index " << m
          << " exceeds the low-modulation limit " << kLowModulationLimit
          << "; three-band results are approximate\n";
    }
  }
}

// Bob's RF phase giving the requested Delta-Phi.
ModulatorSpec bob_for_delta_phi(const RunConfig& cfg, double delta_phi) {
  const ModulatorSpec alice = cfg.alice.to_spec();
  const ModulatorSpec bob = cfg.bob.to_spec();
  const double th = analyze_tandem(alice, bob).theta.value_or(0.0);
  return bob.with_phi(delta_phi + alice.phi - cfg.link.link_phase_rad - th);
}

json feasibility_json(const PairVerdict& pv) {
  json j;
  j["feasible"] = pv.verdict.feasible;
  j["bias_constraint"] = pv.verdict.bias_constraint;
  j["index_ratio"] = pv.verdict.index_ratio ? json(*pv.verdict.index_ratio) : json(nullptr);
  j["failure_reason"] = std::string(to_string(pv.verdict.failure_reason));
  j["witness_bias"] = pv.witness_bias
                          ? json::array({pv.witness_bias->first, pv.witness_bias->second})
                          : json(nullptr);
  return j;
}

std::string qber_text(const std::optional<double>& qber) {
  if (!qber) return "";
  std::ostringstream os;
  os << std::setprecision(kCsvPrecision) << *qber;
  return os.str();
}

const char* verdict_text(const PairVerdict& pv) { return pv.verdict.feasible ? "OK" : "NO"; }

json stats_json(const SessionConfig& session, const SessionStats& stats) {
  json doc = document("qkd");
  doc["protocol"] = std::string(to_string(session.protocol));
  doc["configuration"] =
      std::string(to_string(session.alice.kind)) + "-" + std::string(to_string(session.bob.kind));
  doc["seed"] = session.seed;
  doc["mu"] = session.mu;
  doc["eta"] = session.eta;
  doc["p_dark"] = session.p_dark;
  doc["phase_mismatch"] = session.phase_mismatch;
  doc["sent"] = stats.sent;
  doc["conclusive"] = stats.conclusive;
  doc["sifted_bits"] = stats.sifted_bits;
  doc["errors"] = stats.errors;
  doc["qber"] = stats.qber ? json(*stats.qber) : json(nullptr);
  doc["basis_mismatch"] = stats.basis_mismatch;
  doc["double_clicks"] = stats.double_clicks;
  doc["upper_clicks"] = stats.upper_clicks;
  doc["lower_clicks"] = stats.lower_clicks;
  return doc;
}

}  // namespace

std::vector<SweepRow> sweep_rows(const RunConfig& cfg) {
  const ModulatorSpec alice = cfg.alice.to_spec();
  const LinkSpec link = cfg.link_spec();

  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(cfg.sweep.steps));
  const double step = (cfg.sweep.stop - cfg.sweep.start) / cfg.sweep.steps;
  for (int i = 0; i < cfg.sweep.steps; ++i) {
    const double dphi = cfg.sweep.start + i * step;
    const ModulatorSpec bob = bob_for_delta_phi(cfg, dphi);
    const auto direct = sideband_powers_direct(alice, bob, link);
    const auto closed = sideband_powers(alice, bob, link);
    rows.push_back({dphi, direct.upper, direct.lower, closed.upper, closed.lower});
  }
  return rows;
}

std::vector<SpectrumLine> spectrum_lines(const RunConfig& cfg, double delta_phi,
                                         std::optional<int> order) {
  const ModulatorSpec alice = cfg.alice.to_spec();
  const ModulatorSpec bob = bob_for_delta_phi(cfg, delta_phi);
  const int n = order.value_or(default_harmonic_order(std::max(alice.max_index(), bob.max_index())));
  const HarmonicSpectrum spectrum = exact_tandem_spectrum(alice, bob, cfg.link_spec(), n);

  double strongest = 0.0;
  for (const auto& a : spectrum.amplitudes()) strongest = std::max(strongest, std::norm(a));
  double reference = std::norm(spectrum.at(0));
  if (reference < kSuppressedCarrierRatio * strongest) reference = strongest;

  std::vector<SpectrumLine> lines;
  lines.reserve(spectrum.size());
  for (int k = -n; k <= n; ++k) {
    const double power = std::norm(spectrum.at(k));
    const double db = (power > 0.0 && reference > 0.0)
                          ? std::max(kSpectrumFloorDb, 10.0 * std::log10(power / reference))
                          : kSpectrumFloorDb;
    lines.push_back({k, k * cfg.link.rf_ghz, db});
  }
  return lines;
}

bool perturb_reference(std::vector<Table2Expectation>& reference, const std::string& cell) {
  const auto dot = cell.find('.');
  if (dot == std::string::npos) return false;
  const std::string pair = cell.substr(0, dot);
  const std::string field = cell.substr(dot + 1);

  for (auto& row : reference) {
    if (pair_label(row.alice, row.bob) != pair) continue;
    if (field == "theta") {
      row.theta = [f = row.theta](double a, double b) { return f(a, b) + 1e-3; };
    } else if (field == "ratio") {
      row.ratio = [f = row.ratio](double a, double b) { return f(a, b) * 1.001; };
    } else if (field == "b92.feasible") {
      row.b92.feasible = !row.b92.feasible;
    } else if (field == "bb84.feasible") {
      row.bb84.feasible = !row.bb84.feasible;
    } else if (field == "b92.constraint") {
      row.b92.constraint = "perturbed";
    } else if (field == "bb84.constraint") {
      row.bb84.constraint = "perturbed";
    } else {
      return false;
    }
    return true;
  }
  return false;
}

int cmd_sweep(const RunConfig& cfg, OutputFormat format, std::ostream& out, std::ostream& err) {
  warn_low_modulation(cfg, err);
  const auto rows = sweep_rows(cfg);

  if (format == OutputFormat::Json) {
    json doc = document("sweep");
    doc["configuration"] = pair_label(cfg.alice.kind, cfg.bob.kind);
    json arr = json::array();
    for (const auto& r : rows) {
      arr.push_back({{"delta_phi_rad", r.delta_phi},
                     {"p_upper", r.p_upper},
                     {"p_lower", r.p_lower},
                     {"p_upper_closed", r.p_upper_closed},
                     {"p_lower_closed", r.p_lower_closed}});
    }
    doc["rows"] = std::move(arr);
    write_json(out, doc);
  } else {
    CsvWriter csv(out);
    csv.row("delta_phi_rad", "p_upper", "p_lower", "p_upper_closed", "p_lower_closed");
    for (const auto& r : rows) {
      csv.row(r.delta_phi, r.p_upper, r.p_lower, r.p_upper_closed, r.p_lower_closed);
    }
  }
  return kExitOk;
}

int cmd_spectrum(const RunConfig& cfg, double delta_phi, std::optional<int> order,
                 OutputFormat format, std::ostream& out, std::ostream& err) {
  warn_low_modulation(cfg, err);
  const auto lines = spectrum_lines(cfg, delta_phi, order);
  // The carrier sits at 0 dB unless it was suppressed and the strongest line was used instead.
  for (const auto& l : lines) {
    if (l.harmonic == 0 && l.power_db < 0.0) {
      err << "warning: carrier suppressed; powers are relative to the strongest line\n";
    }
  }
  if (format == OutputFormat::Json) {
    json doc = document("spectrum");
    doc["configuration"] = pair_label(cfg.alice.kind, cfg.bob.kind);
    doc["delta_phi_rad"] = delta_phi;
    json arr = json::array();
    for (const auto& l : lines) {
      arr.push_back({{"offset_ghz", l.offset_ghz}, {"power_db_rel_carrier", l.power_db}});
    }
    doc["lines"] = std::move(arr);
    write_json(out, doc);
  } else {
    CsvWriter csv(out);
    csv.row("offset_ghz", "power_db_rel_carrier");
    for (const auto& l : lines) csv.row(l.offset_ghz, l.power_db);
  }
  return kExitOk;
}

int cmd_table2(std::span<const Table2Expectation> reference, OutputFormat format,
               std::ostream& out, std::ostream& err) {
  const auto grid = default_psi_grid(kTable2GridPoints);
  const auto rows = regenerate_table2(grid);
  const auto comparison = compare_table2(rows, reference);

  if (format == OutputFormat::Json) {
    json doc = document("table2");
    doc["grid_points_per_axis"] = kTable2GridPoints;
    json arr = json::array();
    for (const auto& row : rows) {
      const auto& ref = table2_reference_row(row.alice_kind, row.bob_kind);
      json j;
      j["alice"] = std::string(to_string(row.alice_kind));
      j["bob"] = std::string(to_string(row.bob_kind));
      j["theta_expr"] = ref.theta_label;
      j["ratio_expr"] = ref.ratio_label;
      json samples = json::array();
      const std::size_t n = grid.size();
      for (std::size_t i : {n / 8, 3 * n / 8}) {
        for (std::size_t k : {n / 8, 3 * n / 8}) {
          const auto& s = row.samples[i * n + k];
          samples.push_back({{"psi_a", s.psi_a},
                             {"psi_b", s.psi_b},
                             {"theta", s.theta ? json(*s.theta) : json(nullptr)},
                             {"index_ratio", s.index_ratio ? json(*s.index_ratio) : json(nullptr)}});
        }
      }
      j["samples"] = std::move(samples);
      j["b92"] = feasibility_json(row.b92);
      j["bb84"] = feasibility_json(row.bb84);
      j["both_protocols"] = row.b92.verdict.feasible && row.bb84.verdict.feasible;
      j["novel"] = ref.novel;
      arr.push_back(std::move(j));
    }
    doc["rows"] = std::move(arr);
    doc["max_theta_error"] = std::max(comparison.max_theta_error, comparison.max_theta_error_mod_pi);
    doc["max_ratio_rel_error"] = comparison.max_ratio_rel_error;
    doc["fixture_match"] = comparison.ok();
    json mismatches = json::array();
    for (const auto& m : comparison.mismatches) {
      mismatches.push_back({{"cell", m.cell}, {"detail", m.detail}});
    }
    doc["mismatches"] = std::move(mismatches);
    write_json(out, doc);
  } else {
    CsvWriter csv(out);
    csv.row("alice", "bob", "b92", "b92_constraint", "b92_reason", "bb84", "bb84_constraint",
            "bb84_reason");
    for (const auto& row : rows) {
      csv.row(to_string(row.alice_kind), to_string(row.bob_kind), verdict_text(row.b92),
              row.b92.verdict.bias_constraint, to_string(row.b92.verdict.failure_reason),
              verdict_text(row.bb84), row.bb84.verdict.bias_constraint,
              to_string(row.bb84.verdict.failure_reason));
    }
  }

  for (const auto& m : comparison.mismatches) {
    err << "mismatch " << m.cell << ": " << m.detail << '\n';
  }
  return comparison.ok() ? kExitOk : kExitValidation;
}

int cmd_verify(double max_m, OutputFormat format, std::ostream& out, std::ostream& err) {
  if (!(max_m > 0.0) || max_m > kVerifyMaxIndex) {
    err << "error: --max-m must lie in (0, " << kVerifyMaxIndex
        << "]; larger indices are outside the supported low-modulation regime\n";
    return kExitConfig;
  }
  // Frozen from the oracle lattice: worst relative error ~0.43 m^2, worst
  // absolute error ~0.14 m^2 across all kind pairs.
  const double bound = max_m * max_m;
  const auto summaries = small_signal_lattice(max_m);

  bool pass = true;
  for (const auto& s : summaries) {
    pass = pass && s.worst_relative <= bound && s.worst_absolute <= bound;
  }

  if (format == OutputFormat::Json) {
    json doc = document("verify");
    doc["max_m"] = max_m;
    doc["bound"] = bound;
    json arr = json::array();
    for (const auto& s : summaries) {
      arr.push_back({{"alice", std::string(to_string(s.alice))},
                     {"bob", std::string(to_string(s.bob))},
                     {"points", s.points},
                     {"worst_relative", s.worst_relative},
                     {"worst_absolute", s.worst_absolute},
                     {"pass", s.worst_relative <= bound && s.worst_absolute <= bound}});
    }
    doc["pairs"] = std::move(arr);
    doc["pass"] = pass;
    write_json(out, doc);
  } else {
    CsvWriter csv(out);
    csv.row("alice", "bob", "points", "worst_relative", "worst_absolute", "bound", "pass");
    for (const auto& s : summaries) {
      csv.row(to_string(s.alice), to_string(s.bob), s.points, s.worst_relative, s.worst_absolute,
              bound, (s.worst_relative <= bound && s.worst_absolute <= bound) ? "true" : "false");
    }
  }
  if (!pass) err << "error: small-signal error exceeds the bound " << bound << '\n';
  return pass ? kExitOk : kExitValidation;
}

int cmd_qkd(const RunConfig& cfg, OutputFormat format, std::ostream& out, std::ostream& err) {
  warn_low_modulation(cfg, err);
  const SessionConfig session = cfg.session_config();
  const auto feasibility = check_protocol(session.protocol, session.alice, session.bob);
  if (!feasibility.feasible) {
    err << "error: " << to_string(session.protocol) << " is not feasible for "
        << pair_label(session.alice.kind, session.bob.kind) << ": "
        << to_string(feasibility.failure_reason) << " (requires " << feasibility.bias_constraint
        << ")\n";
    return kExitConfig;
  }

  const SessionStats stats = run_session(session);
  if (format == OutputFormat::Json) {
    write_json(out, stats_json(session, stats));
  } else {
    CsvWriter csv(out);
    csv.row("protocol", "seed", "sent", "conclusive", "sifted_bits", "errors", "qber",
            "basis_mismatch", "double_clicks", "upper_clicks", "lower_clicks");
    csv.row(to_string(session.protocol), session.seed, stats.sent, stats.conclusive,
            stats.sifted_bits, stats.errors, qber_text(stats.qber),
            stats.basis_mismatch, stats.double_clicks, stats.upper_clicks, stats.lower_clicks);
  }
  return kExitOk;
}

}  // namespace fcqkd::cli
