// CLI entry point. Precedence: built-in defaults < --config file < flags.
// Exit codes: 0 success, 2 configuration/usage error, 3 numerical failure.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "nhq/commands.hpp"
#include "nhq/linalg.hpp"

namespace {

struct CliState {
  std::optional<std::string> config_path;
  nhq::ConfigOverrides o;
};

// The shared flag set is accepted by every subcommand; fields a given
// command does not consume are carried in the config and ignored, same as
// when they arrive via the config file.
void add_shared_options(CLI::App* cmd, CliState& s) {
  cmd->add_option("--config", s.config_path, "JSON scenario file; flags override its fields")
      ->check(CLI::ExistingFile);
  cmd->add_option("--gamma", s.o.gamma, "decay rate for both qubits (1/us)");
  cmd->add_option("--omega", s.o.omega, "drive amplitude for both qubits (rad/us)");
  cmd->add_option("--j", s.o.j, "qubit-qubit coupling (rad/us)");
  cmd->add_option("--alpha", s.o.alpha, "jump-channel rate for both qubits (1/us)");
  cmd->add_option("--delta", s.o.delta, "drive detuning for both qubits (rad/us)");
  cmd->add_option("--tmax", s.o.t_max, "time horizon (us)");
  cmd->add_option("--samples", s.o.n_samples, "samples on [0, tmax], endpoints included");
  cmd->add_option("--method", s.o.method, "propagator: exact or rk")
      ->check(CLI::IsMember({"exact", "rk"}));
  cmd->add_option("--initial", s.o.initial, "initial basis state: ff, fe, ef or ee");
  cmd->add_option("--out", s.o.out_path, "output file (default: stdout)");
  cmd->add_option("--format", s.o.format, "output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Driven dissipative qubit pair: trajectories, spectra, phase structure"};
  app.set_version_flag("--version", nhq::kVersion);
  app.require_subcommand(1);

  CliState s;

  CLI::App* evolve = app.add_subcommand(
      "evolve", "Norm-conditioned pure-state trajectory: populations, norm, concurrence");
  add_shared_options(evolve, s);

  CLI::App* master = app.add_subcommand(
      "master", "Trajectory with jump channels: success probability and mixed-state concurrence");
  add_shared_options(master, s);

  CLI::App* spectrum = app.add_subcommand(
      "spectrum", "Eigenvalue sweep over gamma with branch tracking and phase labels");
  add_shared_options(spectrum, s);
  spectrum->add_option("--gamma-min", s.o.spec_gamma_lo, "sweep start (1/us)");
  spectrum->add_option("--gamma-max", s.o.spec_gamma_hi, "sweep end (1/us)");
  spectrum->add_option("--points", s.o.spec_points, "sweep sample count");

  CLI::App* phase = app.add_subcommand(
      "phase-diagram", "Phase classification over an (omega, gamma) grid with boundary samples");
  add_shared_options(phase, s);
  phase->add_option("--omega-min", s.o.pd_omega_lo, "grid omega start (rad/us)");
  phase->add_option("--omega-max", s.o.pd_omega_hi, "grid omega end (rad/us)");
  phase->add_option("--gamma-min", s.o.pd_gamma_lo, "grid gamma start (1/us)");
  phase->add_option("--gamma-max", s.o.pd_gamma_hi, "grid gamma end (1/us)");
  phase->add_option("--res-omega", s.o.pd_n_omega, "grid points along omega");
  phase->add_option("--res-gamma", s.o.pd_n_gamma, "grid points along gamma");

  CLI::App* ep = app.add_subcommand(
      "ep", "Bisect the phase boundary for the exceptional point within a gamma bracket");
  add_shared_options(ep, s);
  ep->add_option("--lo", s.o.ep_lo, "bracket start, must classify unbroken (1/us)");
  ep->add_option("--hi", s.o.ep_hi, "bracket end, must classify broken (1/us)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    nhq::ScenarioConfig cfg;
    if (s.config_path) cfg = nhq::load_config(*s.config_path);
    nhq::apply_overrides(cfg, s.o);
    nhq::validate_config(cfg);
    return nhq::run_command(app.get_subcommands().front()->get_name(), cfg);
  } catch (const nhq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const nhq::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
}
