#pragma once

// Scenario configuration and the five command workflows behind the CLI:
// evolve, master, spectrum, phase-diagram, ep. Commands are plain functions
// returning tables so tests can drive them without a process boundary.
//
// Error contract: invalid configuration raises ConfigError (CLI exit 2);
// numerical breakdown raises NumericalError (CLI exit 3). A trajectory that
// hits the decay cutoff before the requested horizon still emits its partial
// table but the run reports exit 3.

#include <array>
#include <optional>
#include <string>

#include "nhq/dynamics.hpp"
#include "nhq/io.hpp"
#include "nhq/model.hpp"

namespace nhq {

inline constexpr const char* kVersion = "0.1.0";

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ScenarioConfig {
  SystemParams params;
  std::array<Complex, 4> initial{Complex(1, 0), 0, 0, 0};
  std::string initial_label = "ff";  // "custom" when raw amplitudes are given
  double t_max = 20.0;
  int n_samples = 2001;
  Method method = Method::exact;
  std::string out_path;       // empty: stdout
  std::string format = "csv"; // csv | json

  // spectrum sweep
  double spec_gamma_lo = 0.0, spec_gamma_hi = 3.0;
  int spec_points = 301;

  // phase diagram
  double pd_omega_lo = 0.1, pd_omega_hi = 5.0;
  double pd_gamma_lo = 0.1, pd_gamma_hi = 5.0;
  int pd_n_omega = 50, pd_n_gamma = 50;

  // ep bracket
  double ep_lo = 0.1, ep_hi = 3.0;
};

// Flag values layered on top of a config file; set fields win.
struct ConfigOverrides {
  std::optional<double> gamma, omega, j, alpha, delta, t_max;
  std::optional<int> n_samples;
  std::optional<std::string> method, out_path, format, initial;
  std::optional<double> spec_gamma_lo, spec_gamma_hi;
  std::optional<int> spec_points;
  std::optional<double> pd_omega_lo, pd_omega_hi, pd_gamma_lo, pd_gamma_hi;
  std::optional<int> pd_n_omega, pd_n_gamma;
  std::optional<double> ep_lo, ep_hi;
};

ScenarioConfig load_config(const std::string& json_path);
void apply_overrides(ScenarioConfig& c, const ConfigOverrides& o);
void validate_config(const ScenarioConfig& c);

struct CommandResult {
  Metadata metadata;
  std::vector<ResultTable> tables;
  bool numerical_failure = false;  // partial result; CLI exits 3
};

CommandResult cmd_evolve(const ScenarioConfig& c);
CommandResult cmd_master(const ScenarioConfig& c);
CommandResult cmd_spectrum(const ScenarioConfig& c);
CommandResult cmd_phase_diagram(const ScenarioConfig& c);
CommandResult cmd_ep(const ScenarioConfig& c);

// Dispatches, writes to c.out_path or stdout, returns the process exit code.
int run_command(const std::string& name, const ScenarioConfig& c);

}  // namespace nhq
