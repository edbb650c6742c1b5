#include "nhq/commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "nhq/entanglement.hpp"
#include "nhq/spectrum.hpp"

namespace nhq {

namespace {

using nlohmann::json;

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("config field '" + key + "' must be a number");
  return v.get<double>();
}

int as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError("config field '" + key + "' must be an integer");
  return v.get<int>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("config field '" + key + "' must be a string");
  return v.get<std::string>();
}

std::pair<double, double> as_range(const json& v, const std::string& key) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw ConfigError("config field '" + key + "' must be a [lo, hi] number pair");
  return {v[0].get<double>(), v[1].get<double>()};
}

Complex as_amplitude(const json& v, const std::string& key) {
  if (v.is_number()) return Complex(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return Complex(v[0].get<double>(), v[1].get<double>());
  throw ConfigError("config field '" + key + "' entries must be numbers or [re, im] pairs");
}

int label_index(const std::string& label) {
  for (int k = 0; k < 4; ++k)
    if (label == kBasisLabels[static_cast<size_t>(k)]) return k;
  return -1;
}

void set_initial_from_label(ScenarioConfig& c, const std::string& label) {
  const int k = label_index(label);
  if (k < 0)
    throw ConfigError("initial_state label '" + label + "' is not one of ff, fe, ef, ee");
  c.initial = {Complex(0, 0), Complex(0, 0), Complex(0, 0), Complex(0, 0)};
  c.initial[static_cast<size_t>(k)] = 1.0;
  c.initial_label = label;
}

Method parse_method(const std::string& m) {
  if (m == "exact") return Method::exact;
  if (m == "rk") return Method::rk;
  throw ConfigError("method must be 'exact' or 'rk', got '" + m + "'");
}

}  // namespace

ScenarioConfig load_config(const std::string& json_path) {
  std::ifstream in(json_path);
  if (!in) throw ConfigError("cannot open config file: " + json_path);

  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config root must be a JSON object");

  ScenarioConfig c;
  for (const auto& [key, value] : doc.items()) {
    if (key == "delta") c.params.set_delta(as_number(value, key));
    else if (key == "delta1") c.params.delta1 = as_number(value, key);
    else if (key == "delta2") c.params.delta2 = as_number(value, key);
    else if (key == "gamma") c.params.set_gamma(as_number(value, key));
    else if (key == "gamma1") c.params.gamma1 = as_number(value, key);
    else if (key == "gamma2") c.params.gamma2 = as_number(value, key);
    else if (key == "omega") c.params.set_omega(as_number(value, key));
    else if (key == "omega1") c.params.omega1 = as_number(value, key);
    else if (key == "omega2") c.params.omega2 = as_number(value, key);
    else if (key == "j") c.params.J = as_number(value, key);
    else if (key == "alpha") c.params.set_alpha(as_number(value, key));
    else if (key == "alpha1") c.params.alpha1 = as_number(value, key);
    else if (key == "alpha2") c.params.alpha2 = as_number(value, key);
    else if (key == "t_max") c.t_max = as_number(value, key);
    else if (key == "n_samples") c.n_samples = as_int(value, key);
    else if (key == "method") c.method = parse_method(as_string(value, key));
    else if (key == "out") c.out_path = as_string(value, key);
    else if (key == "format") c.format = as_string(value, key);
    else if (key == "initial_state") {
      if (value.is_string()) {
        set_initial_from_label(c, value.get<std::string>());
      } else if (value.is_array() && value.size() == 4) {
        for (size_t k = 0; k < 4; ++k) c.initial[k] = as_amplitude(value[k], key);
        c.initial_label = "custom";
      } else {
        throw ConfigError("initial_state must be a basis label or an array of 4 amplitudes");
      }
    } else if (key == "gamma_range") {
      std::tie(c.spec_gamma_lo, c.spec_gamma_hi) = as_range(value, key);
    } else if (key == "n_points") {
      c.spec_points = as_int(value, key);
    } else if (key == "omega_range") {
      std::tie(c.pd_omega_lo, c.pd_omega_hi) = as_range(value, key);
    } else if (key == "pd_gamma_range") {
      std::tie(c.pd_gamma_lo, c.pd_gamma_hi) = as_range(value, key);
    } else if (key == "resolution") {
      if (!value.is_array() || value.size() != 2)
        throw ConfigError("resolution must be [n_omega, n_gamma]");
      c.pd_n_omega = as_int(value[0], key);
      c.pd_n_gamma = as_int(value[1], key);
    } else if (key == "bracket") {
      std::tie(c.ep_lo, c.ep_hi) = as_range(value, key);
    } else {
      throw ConfigError("unknown config field '" + key + "'");
    }
  }
  return c;
}

void apply_overrides(ScenarioConfig& c, const ConfigOverrides& o) {
  if (o.gamma) c.params.set_gamma(*o.gamma);
  if (o.omega) c.params.set_omega(*o.omega);
  if (o.j) c.params.J = *o.j;
  if (o.alpha) c.params.set_alpha(*o.alpha);
  if (o.delta) c.params.set_delta(*o.delta);
  if (o.t_max) c.t_max = *o.t_max;
  if (o.n_samples) c.n_samples = *o.n_samples;
  if (o.method) c.method = parse_method(*o.method);
  if (o.out_path) c.out_path = *o.out_path;
  if (o.format) c.format = *o.format;
  if (o.initial) set_initial_from_label(c, *o.initial);
  if (o.spec_gamma_lo) c.spec_gamma_lo = *o.spec_gamma_lo;
  if (o.spec_gamma_hi) c.spec_gamma_hi = *o.spec_gamma_hi;
  if (o.spec_points) c.spec_points = *o.spec_points;
  if (o.pd_omega_lo) c.pd_omega_lo = *o.pd_omega_lo;
  if (o.pd_omega_hi) c.pd_omega_hi = *o.pd_omega_hi;
  if (o.pd_gamma_lo) c.pd_gamma_lo = *o.pd_gamma_lo;
  if (o.pd_gamma_hi) c.pd_gamma_hi = *o.pd_gamma_hi;
  if (o.pd_n_omega) c.pd_n_omega = *o.pd_n_omega;
  if (o.pd_n_gamma) c.pd_n_gamma = *o.pd_n_gamma;
  if (o.ep_lo) c.ep_lo = *o.ep_lo;
  if (o.ep_hi) c.ep_hi = *o.ep_hi;
}

void validate_config(const ScenarioConfig& c) {
  try {
    c.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(c.t_max > 0)) throw ConfigError("t_max must be positive");
  if (c.n_samples < 2) throw ConfigError("n_samples must be at least 2");
  if (c.format != "csv" && c.format != "json")
    throw ConfigError("format must be 'csv' or 'json', got '" + c.format + "'");

  double norm2 = 0.0;
  for (const Complex& a : c.initial) norm2 += std::norm(a);
  if (std::abs(std::sqrt(norm2) - 1.0) > 1e-6)
    throw ConfigError("initial_state amplitudes must be normalized (within 1e-6)");
}

namespace {

ComplexVec initial_vector(const ScenarioConfig& c) {
  ComplexVec psi(4);
  for (int k = 0; k < 4; ++k) psi[k] = c.initial[static_cast<size_t>(k)];
  return psi / psi.norm();
}

std::string initial_echo(const ScenarioConfig& c) {
  if (c.initial_label != "custom") return c.initial_label;
  std::ostringstream os;
  for (size_t k = 0; k < 4; ++k) {
    if (k) os << ";";
    os << "(" << format_number(c.initial[k].real()) << "," << format_number(c.initial[k].imag())
       << ")";
  }
  return os.str();
}

Metadata base_metadata(const ScenarioConfig& c, const std::string& command) {
  Metadata m;
  m.emplace_back("command", command);
  m.emplace_back("version", kVersion);
  m.emplace_back("delta1", format_number(c.params.delta1));
  m.emplace_back("delta2", format_number(c.params.delta2));
  m.emplace_back("gamma1", format_number(c.params.gamma1));
  m.emplace_back("gamma2", format_number(c.params.gamma2));
  m.emplace_back("omega1", format_number(c.params.omega1));
  m.emplace_back("omega2", format_number(c.params.omega2));
  m.emplace_back("j", format_number(c.params.J));
  m.emplace_back("alpha1", format_number(c.params.alpha1));
  m.emplace_back("alpha2", format_number(c.params.alpha2));
  return m;
}

void append_grid_metadata(Metadata& m, const ScenarioConfig& c) {
  m.emplace_back("initial_state", initial_echo(c));
  m.emplace_back("t_max", format_number(c.t_max));
  m.emplace_back("n_samples", std::to_string(c.n_samples));
  m.emplace_back("method", c.method == Method::exact ? "exact" : "rk");
  m.emplace_back("rk_rel_tol", format_number(kRkRelTol));
  m.emplace_back("rk_abs_tol", format_number(kRkAbsTol));
  m.emplace_back("decay_cutoff", format_number(kDecayCutoff));
}

void append_truncation_metadata(Metadata& m, const Trajectory& traj) {
  m.emplace_back("truncated", traj.truncated ? "true" : "false");
  if (traj.truncated && !traj.times.empty())
    m.emplace_back("last_sample_time", format_number(traj.times.back()));
}

}  // namespace

CommandResult cmd_evolve(const ScenarioConfig& c) {
  validate_config(c);
  const ComplexMat H = build_total_h(c.params);
  const auto grid = uniform_grid(c.t_max, c.n_samples);
  const Trajectory traj = evolve_pure(H, initial_vector(c), grid, c.method);

  CommandResult r;
  r.metadata = base_metadata(c, "evolve");
  append_grid_metadata(r.metadata, c);
  append_truncation_metadata(r.metadata, traj);
  r.numerical_failure = traj.truncated;

  ResultTable t;
  t.columns = {"t", "P1", "P2", "P3", "P4", "norm", "concurrence"};
  for (size_t k = 0; k < traj.times.size(); ++k) {
    t.rows.push_back({format_number(traj.times[k]), format_number(traj.populations[k][0]),
                      format_number(traj.populations[k][1]), format_number(traj.populations[k][2]),
                      format_number(traj.populations[k][3]), format_number(traj.weight[k]),
                      format_number(traj.concurrence[k])});
  }
  r.tables.push_back(std::move(t));
  return r;
}

CommandResult cmd_master(const ScenarioConfig& c) {
  validate_config(c);
  const ComplexMat H = build_total_h(c.params);
  const ComplexVec psi0 = initial_vector(c);
  const ComplexMat rho0 = psi0 * psi0.adjoint();
  const Trajectory traj =
      evolve_master(H, build_jump_ops(c.params), rho0, uniform_grid(c.t_max, c.n_samples), c.method);

  CommandResult r;
  r.metadata = base_metadata(c, "master");
  append_grid_metadata(r.metadata, c);
  append_truncation_metadata(r.metadata, traj);
  r.numerical_failure = traj.truncated;

  ResultTable t;
  t.columns = {"t", "P", "P1", "P2", "P3", "P4", "concurrence_mixed"};
  for (size_t k = 0; k < traj.times.size(); ++k) {
    t.rows.push_back({format_number(traj.times[k]), format_number(traj.weight[k]),
                      format_number(traj.populations[k][0]), format_number(traj.populations[k][1]),
                      format_number(traj.populations[k][2]), format_number(traj.populations[k][3]),
                      format_number(traj.concurrence[k])});
  }
  r.tables.push_back(std::move(t));
  return r;
}

CommandResult cmd_spectrum(const ScenarioConfig& c) {
  validate_config(c);
  if (!(c.spec_gamma_hi > c.spec_gamma_lo) || c.spec_gamma_lo < 0)
    throw ConfigError("spectrum gamma_range must be non-negative and increasing");
  if (c.spec_points < 2) throw ConfigError("spectrum n_points must be at least 2");

  CommandResult r;
  r.metadata = base_metadata(c, "spectrum");
  r.metadata.emplace_back("gamma_range",
                          "[" + format_number(c.spec_gamma_lo) + "," + format_number(c.spec_gamma_hi) + "]");
  r.metadata.emplace_back("n_points", std::to_string(c.spec_points));
  r.metadata.emplace_back("phase_epsilon", format_number(kPhaseEpsilon));

  ResultTable t;
  t.columns = {"gamma", "re1", "re2", "re3", "re4", "im1", "im2", "im3", "im4",
               "max_im_spread", "phase_label"};

  // Branches are continuity-tracked: each row's eigenvalues are permuted to
  // sit nearest the previous row's, so curves do not swap when the (Re, Im)
  // sort order changes along the sweep.
  std::vector<Complex> prev;
  bool failures = false;
  for (int k = 0; k < c.spec_points; ++k) {
    const double gamma =
        c.spec_gamma_lo + (c.spec_gamma_hi - c.spec_gamma_lo) * k / (c.spec_points - 1);
    SystemParams p = c.params;
    p.set_gamma(gamma);

    std::vector<std::string> row{format_number(gamma)};
    try {
      const SpectrumResult s = analyze(p);
      std::array<int, 4> perm{0, 1, 2, 3};
      if (!prev.empty()) {
        std::array<int, 4> idx{0, 1, 2, 3};
        double best = std::numeric_limits<double>::infinity();
        do {
          double cost = 0.0;
          for (int i = 0; i < 4; ++i)
            cost += std::abs(s.eigenvalues[idx[static_cast<size_t>(i)]] - prev[static_cast<size_t>(i)]);
          if (cost < best) {
            best = cost;
            perm = idx;
          }
        } while (std::next_permutation(idx.begin(), idx.end()));
      }
      prev.resize(4);
      for (int i = 0; i < 4; ++i) prev[static_cast<size_t>(i)] = s.eigenvalues[perm[static_cast<size_t>(i)]];

      for (int i = 0; i < 4; ++i) row.push_back(format_number(prev[static_cast<size_t>(i)].real()));
      for (int i = 0; i < 4; ++i) row.push_back(format_number(prev[static_cast<size_t>(i)].imag()));
      row.push_back(format_number(s.max_im_spread));
      row.push_back(classify_phase(s).unbroken ? "unbroken" : "broken");
    } catch (const NumericalError&) {
      failures = true;
      for (int i = 0; i < 9; ++i) row.push_back("nan");
      row.push_back("failed");
    }
    t.rows.push_back(std::move(row));
  }
  r.metadata.emplace_back("failed_points", failures ? "present" : "none");
  r.tables.push_back(std::move(t));
  return r;
}

CommandResult cmd_phase_diagram(const ScenarioConfig& c) {
  validate_config(c);
  const PhaseDiagram pd = sweep_phase_diagram(c.params, c.pd_omega_lo, c.pd_omega_hi, c.pd_n_omega,
                                              c.pd_gamma_lo, c.pd_gamma_hi, c.pd_n_gamma);

  CommandResult r;
  r.metadata = base_metadata(c, "phase-diagram");
  r.metadata.emplace_back("omega_range",
                          "[" + format_number(c.pd_omega_lo) + "," + format_number(c.pd_omega_hi) + "]");
  r.metadata.emplace_back("gamma_range",
                          "[" + format_number(c.pd_gamma_lo) + "," + format_number(c.pd_gamma_hi) + "]");
  r.metadata.emplace_back("resolution",
                          std::to_string(c.pd_n_omega) + "x" + std::to_string(c.pd_n_gamma));
  r.metadata.emplace_back("phase_epsilon", format_number(kPhaseEpsilon));

  ResultTable cells;
  cells.name = "cells";
  cells.columns = {"omega", "gamma", "label"};
  for (size_t io = 0; io < pd.omegas.size(); ++io)
    for (size_t ig = 0; ig < pd.gammas.size(); ++ig) {
      const int lab = pd.labels[io * pd.gammas.size() + ig];
      cells.rows.push_back({format_number(pd.omegas[io]), format_number(pd.gammas[ig]),
                            lab == 1 ? "unbroken" : (lab == 0 ? "broken" : "unclassified")});
    }

  ResultTable boundary;
  boundary.name = "ep_boundary";
  boundary.columns = {"omega", "gamma_ep"};
  for (const auto& [omega, gamma_ep] : pd.ep_boundary)
    boundary.rows.push_back({format_number(omega), format_number(gamma_ep)});

  r.tables.push_back(std::move(cells));
  r.tables.push_back(std::move(boundary));
  return r;
}

CommandResult cmd_ep(const ScenarioConfig& c) {
  validate_config(c);
  if (!(c.ep_lo < c.ep_hi)) throw ConfigError("ep bracket reversed or empty");

  EpResult ep;
  try {
    ep = find_ep(c.params, c.ep_lo, c.ep_hi);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  CommandResult r;
  r.metadata = base_metadata(c, "ep");
  r.metadata.emplace_back("bracket", "[" + format_number(c.ep_lo) + "," + format_number(c.ep_hi) + "]");
  r.metadata.emplace_back("bisection_tol", format_number(1e-6));
  r.metadata.emplace_back("phase_epsilon", format_number(kPhaseEpsilon));

  ResultTable t;
  t.columns = {"gamma_ep", "min_gap", "iterations"};
  t.rows.push_back({format_number(ep.gamma_ep), format_number(ep.min_gap), std::to_string(ep.iterations)});
  r.tables.push_back(std::move(t));
  return r;
}

int run_command(const std::string& name, const ScenarioConfig& c) {
  CommandResult result;
  if (name == "evolve") result = cmd_evolve(c);
  else if (name == "master") result = cmd_master(c);
  else if (name == "spectrum") result = cmd_spectrum(c);
  else if (name == "phase-diagram") result = cmd_phase_diagram(c);
  else if (name == "ep") result = cmd_ep(c);
  else throw ConfigError("unknown command '" + name + "'");

  std::ofstream file;
  if (!c.out_path.empty()) {
    file.open(c.out_path);
    if (!file) throw ConfigError("cannot open output file: " + c.out_path);
  }
  std::ostream& os = c.out_path.empty() ? std::cout : file;
  if (c.format == "json")
    write_json(os, result.metadata, result.tables);
  else
    write_csv(os, result.metadata, result.tables);
  os.flush();
  if (!os) throw ConfigError("failed writing output");

  return result.numerical_failure ? 3 : 0;
}

}  // namespace nhq
