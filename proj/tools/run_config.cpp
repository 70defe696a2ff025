#include "run_config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "fcqkd/error.hpp"

namespace fcqkd::cli {

namespace {

namespace pt = boost::property_tree;

[[noreturn]] void config_error(const std::string& message) {
  throw Error(ErrorKind::Config, message);
}

double parse_double(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
    config_error("key '" + key + "': expected a number, got '" + text + "'");
  }
  return value;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    config_error("key '" + key + "': expected a non-negative integer, got '" + text + "'");
  }
  return value;
}

void reject_unknown(const std::string& section, const pt::ptree& tree,
                    const std::set<std::string>& allowed) {
  for (const auto& [key, child] : tree) {
    if (!child.empty()) config_error("section [" + section + "]: nested key '" + key + "'");
    if (!allowed.contains(key)) config_error("section [" + section + "]: unknown key '" + key + "'");
  }
}

ModulatorConfig parse_modulator(const std::string& section, const pt::ptree& tree) {
  reject_unknown(section, tree, {"kind", "v_pi_volts", "v_rf_volts", "m", "v_dc_volts", "psi", "phi"});

  const auto kind_text = tree.get_optional<std::string>("kind");
  if (!kind_text) config_error("section [" + section + "]: missing 'kind'");
  const auto kind = parse_modulator_kind(*kind_text);
  if (!kind) config_error("section [" + section + "]: kind must be PM, AM or UM");

  ModulatorConfig mod;
  mod.kind = *kind;
  mod.v_pi_volts = default_v_pi(*kind);
  auto number = [&](const char* key) -> std::optional<double> {
    if (auto v = tree.get_optional<std::string>(key)) {
      return parse_double(section + "." + key, *v);
    }
    return std::nullopt;
  };
  if (auto v = number("v_pi_volts")) mod.v_pi_volts = *v;
  mod.v_rf_volts = number("v_rf_volts");
  mod.m = number("m");
  mod.v_dc_volts = number("v_dc_volts");
  mod.psi = number("psi");
  if (auto v = number("phi")) mod.phi = *v;

  if (mod.v_rf_volts.has_value() == mod.m.has_value()) {
    config_error("section [" + section + "]: set exactly one of 'v_rf_volts' and 'm'");
  }
  if (mod.v_dc_volts.has_value() == mod.psi.has_value()) {
    config_error("section [" + section + "]: set exactly one of 'v_dc_volts' and 'psi'");
  }
  try {
    (void)mod.to_spec();
  } catch (const Error& e) {
    config_error("section [" + section + "]: " + e.what());
  }
  return mod;
}

}  // namespace

std::optional<OutputFormat> parse_output_format(std::string_view text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  return std::nullopt;
}

double default_v_pi(ModulatorKind kind) {
  switch (kind) {
    case ModulatorKind::AM: return 4.7;
    case ModulatorKind::PM: return 7.4;
    case ModulatorKind::UM: return 5.5;
  }
  return 1.0;
}

double ModulatorConfig::modulation_index() const {
  return m ? *m : index_from_voltage(v_rf_volts.value_or(0.0), v_pi_volts);
}

double ModulatorConfig::bias_phase() const {
  return psi ? *psi : bias_phase_from_voltage(v_dc_volts.value_or(0.0), v_pi_volts);
}

ModulatorSpec ModulatorConfig::to_spec() const {
  return make_modulator(kind, modulation_index(), bias_phase(), phi);
}

LinkSpec RunConfig::link_spec() const {
  LinkSpec spec;
  spec.rf_frequency = 2.0 * std::numbers::pi * link.rf_ghz * 1e9;
  spec.link_phase = link.link_phase_rad;
  spec.loss = link.loss;
  spec.validate();
  return spec;
}

SessionConfig RunConfig::session_config() const {
  SessionConfig cfg;
  cfg.protocol = montecarlo.protocol;
  cfg.alice = alice.to_spec();
  cfg.bob = bob.to_spec();
  cfg.link = link_spec();
  cfg.mu = montecarlo.mu;
  cfg.eta = montecarlo.eta;
  cfg.p_dark = montecarlo.p_dark;
  cfg.n_pulses = montecarlo.n_pulses;
  cfg.seed = montecarlo.seed;
  cfg.phase_mismatch = montecarlo.phase_mismatch;
  return cfg;
}

RunConfig default_run_config() {
  RunConfig cfg;
  cfg.alice.kind = ModulatorKind::UM;
  cfg.alice.v_pi_volts = default_v_pi(ModulatorKind::UM);
  cfg.alice.m = 0.1;
  cfg.alice.psi = 0.0;
  cfg.bob.kind = ModulatorKind::PM;
  cfg.bob.v_pi_volts = default_v_pi(ModulatorKind::PM);
  cfg.bob.m = 0.05;
  cfg.bob.psi = 0.0;
  return cfg;
}

RunConfig parse_run_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    config_error(std::string("malformed config: ") + e.what());
  }

  RunConfig cfg = default_run_config();
  for (const auto& [name, section] : tree) {
    if (section.empty()) config_error("key '" + name + "' outside any section");
    auto get = [&](const char* key) { return section.get_optional<std::string>(key); };
    auto number = [&](const char* key, double& target) {
      if (auto v = get(key)) target = parse_double(name + "." + key, *v);
    };

    if (name == "source") {
      reject_unknown(name, section, {"wavelength_nm", "power_dbm"});
      number("wavelength_nm", cfg.source.wavelength_nm);
      number("power_dbm", cfg.source.power_dbm);
    } else if (name == "alice") {
      cfg.alice = parse_modulator(name, section);
    } else if (name == "bob") {
      cfg.bob = parse_modulator(name, section);
    } else if (name == "link") {
      reject_unknown(name, section, {"rf_ghz", "link_phase_rad", "loss"});
      number("rf_ghz", cfg.link.rf_ghz);
      number("link_phase_rad", cfg.link.link_phase_rad);
      number("loss", cfg.link.loss);
    } else if (name == "sweep") {
      reject_unknown(name, section, {"variable", "start", "stop", "steps"});
      if (auto v = get("variable")) cfg.sweep.variable = *v;
      number("start", cfg.sweep.start);
      number("stop", cfg.sweep.stop);
      if (auto v = get("steps")) cfg.sweep.steps = static_cast<int>(parse_u64("sweep.steps", *v));
    } else if (name == "montecarlo") {
      reject_unknown(name, section,
                     {"protocol", "mu", "eta", "p_dark", "n_pulses", "seed", "phase_mismatch"});
      if (auto v = get("protocol")) {
        const auto protocol = parse_protocol(*v);
        if (!protocol) config_error("montecarlo.protocol must be B92 or BB84");
        cfg.montecarlo.protocol = *protocol;
      }
      number("mu", cfg.montecarlo.mu);
      number("eta", cfg.montecarlo.eta);
      number("p_dark", cfg.montecarlo.p_dark);
      number("phase_mismatch", cfg.montecarlo.phase_mismatch);
      if (auto v = get("n_pulses")) cfg.montecarlo.n_pulses = parse_u64("montecarlo.n_pulses", *v);
      if (auto v = get("seed")) cfg.montecarlo.seed = parse_u64("montecarlo.seed", *v);
    } else if (name == "output") {
      reject_unknown(name, section, {"format", "path"});
      if (auto v = get("format")) {
        const auto format = parse_output_format(*v);
        if (!format) config_error("output.format must be csv or json");
        cfg.output.format = *format;
      }
      if (auto v = get("path")) cfg.output.path = *v;
    } else {
      config_error("unknown section [" + name + "]");
    }
  }

  if (cfg.sweep.variable != "delta_phi") {
    config_error("sweep.variable: only 'delta_phi' is supported");
  }
  if (cfg.sweep.steps <= 0) config_error("sweep.steps must be > 0");
  if (!(cfg.link.rf_ghz > 0.0)) config_error("link.rf_ghz must be > 0");
  if (!(cfg.link.loss > 0.0 && cfg.link.loss <= 1.0)) config_error("link.loss must lie in (0, 1]");
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) config_error("cannot open config '" + path.string() + "'");
  return parse_run_config(in);
}

}  // namespace fcqkd::cli
