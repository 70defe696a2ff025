#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "fcqkd/error.hpp"
#include "run_config.hpp"

namespace {

using namespace fcqkd;
using namespace fcqkd::cli;

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::TruncationRisk:
    case ErrorKind::OutOfDomain:
      return kExitValidation;
    default:
      return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frequency-coded QKD tandem modulator toolkit", "fcqkd"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path;
  std::string format_text;
  std::optional<std::uint64_t> seed;
  double delta_phi = 0.0;
  std::optional<int> order;
  double max_m = 0.1;
  std::string perturb_cell;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "INI run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", out_path, "output file ('-' for stdout)");
    sub->add_option("--format", format_text, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  };

  auto* sweep = app.add_subcommand("sweep", "sideband powers versus delta-phi");
  add_common(sweep);

  auto* spectrum = app.add_subcommand("spectrum", "exact output spectrum in dB relative to carrier");
  add_common(spectrum);
  spectrum->add_option("--delta-phi", delta_phi, "phase difference seen at the receiver [rad]");
  spectrum->add_option("--order", order, "highest harmonic kept")->check(CLI::NonNegativeNumber);

  auto* table2 = app.add_subcommand("table2", "regenerate the nine-configuration feasibility table");
  add_common(table2);
  table2->add_option("--perturb-fixture", perturb_cell, "corrupt one reference cell")->group("");

  auto* verify = app.add_subcommand("verify", "compare the three-band model with the exact spectrum");
  add_common(verify);
  verify->add_option("--max-m", max_m, "largest modulation index on the lattice");

  auto* qkd = app.add_subcommand("qkd", "Monte Carlo key exchange session");
  add_common(qkd);
  qkd->add_option("--seed", seed, "PRNG seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    RunConfig cfg = config_path.empty() ? default_run_config() : load_run_config(config_path);
    if (!format_text.empty()) cfg.output.format = *parse_output_format(format_text);
    if (!out_path.empty()) cfg.output.path = out_path;
    if (seed) cfg.montecarlo.seed = *seed;

    std::ostringstream buffer;
    int rc = kExitOk;
    if (*sweep) {
      rc = cmd_sweep(cfg, cfg.output.format, buffer, std::cerr);
    } else if (*spectrum) {
      rc = cmd_spectrum(cfg, delta_phi, order, cfg.output.format, buffer, std::cerr);
    } else if (*table2) {
      auto reference = table2_reference();
      if (!perturb_cell.empty() && !perturb_reference(reference, perturb_cell)) {
        std::cerr << "error: unknown fixture cell '" << perturb_cell << "'\n";
        return kExitConfig;
      }
      rc = cmd_table2(reference, cfg.output.format, buffer, std::cerr);
    } else if (*verify) {
      rc = cmd_verify(max_m, cfg.output.format, buffer, std::cerr);
    } else if (*qkd) {
      rc = cmd_qkd(cfg, cfg.output.format, buffer, std::cerr);
    }

    if (cfg.output.path == "-") {
      std::cout << buffer.str();
    } else {
      std::ofstream file(cfg.output.path, std::ios::binary);
      if (!(file << buffer.str())) {
        std::cerr << "error: cannot write '" << cfg.output.path << "'\n";
        return kExitConfig;
      }
    }
    return rc;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}
