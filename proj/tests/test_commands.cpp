#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "nhq/commands.hpp"
#include "nhq/io.hpp"

using namespace nhq;

namespace {

namespace fs = std::filesystem;

// Unique-ish scratch file that cleans up after itself.
struct TempFile {
  fs::path path;
  explicit TempFile(const std::string& stem) {
    path = fs::temp_directory_path() / (stem + "-" + std::to_string(::getpid()) + ".tmp");
  }
  ~TempFile() {
    std::error_code ec;
    fs::remove(path, ec);
  }
};

fs::path write_file(const TempFile& f, const std::string& content) {
  std::ofstream out(f.path);
  out << content;
  return f.path;
}

std::string meta_get(const Metadata& m, const std::string& key) {
  for (const auto& [k, v] : m)
    if (k == key) return v;
  return "<missing:" + key + ">";
}

std::vector<double> column(const ResultTable& t, const std::string& name) {
  const auto it = std::find(t.columns.begin(), t.columns.end(), name);
  REQUIRE(it != t.columns.end());
  const size_t idx = static_cast<size_t>(it - t.columns.begin());
  std::vector<double> out;
  out.reserve(t.rows.size());
  for (const auto& row : t.rows) out.push_back(std::stod(row[idx]));
  return out;
}

ScenarioConfig quick_config(double gamma, double t_max, int n_samples) {
  ScenarioConfig c;
  c.params.set_gamma(gamma);
  c.t_max = t_max;
  c.n_samples = n_samples;
  return c;
}

}  // namespace

TEST_SUITE("commands") {

TEST_CASE("config file populates every recognized field") {
  TempFile f("cfg-full");
  write_file(f, R"({
    "delta": 0.1, "gamma1": 0.3, "gamma2": 0.7, "omega": 2.0, "j": 5.0,
    "alpha": 0.2, "t_max": 10.0, "n_samples": 101, "method": "rk",
    "out": "x.csv", "format": "json", "initial_state": "fe",
    "gamma_range": [0.0, 2.0], "n_points": 21,
    "omega_range": [0.5, 4.5], "pd_gamma_range": [0.2, 3.2], "resolution": [7, 9],
    "bracket": [0.2, 2.5]
  })");
  const ScenarioConfig c = load_config(f.path.string());
  CHECK(c.params.delta1 == 0.1);
  CHECK(c.params.delta2 == 0.1);
  CHECK(c.params.gamma1 == 0.3);
  CHECK(c.params.gamma2 == 0.7);
  CHECK(c.params.omega1 == 2.0);
  CHECK(c.params.J == 5.0);
  CHECK(c.params.alpha1 == 0.2);
  CHECK(c.t_max == 10.0);
  CHECK(c.n_samples == 101);
  CHECK(c.method == Method::rk);
  CHECK(c.out_path == "x.csv");
  CHECK(c.format == "json");
  CHECK(c.initial_label == "fe");
  CHECK(c.initial[1] == Complex(1, 0));
  CHECK(c.spec_gamma_lo == 0.0);
  CHECK(c.spec_gamma_hi == 2.0);
  CHECK(c.spec_points == 21);
  CHECK(c.pd_omega_lo == 0.5);
  CHECK(c.pd_n_omega == 7);
  CHECK(c.pd_n_gamma == 9);
  CHECK(c.ep_lo == 0.2);
  CHECK(c.ep_hi == 2.5);
  CHECK_NOTHROW(validate_config(c));
}

TEST_CASE("config accepts raw initial amplitudes") {
  TempFile f("cfg-amp");
  write_file(f, R"({"initial_state": [0.7071067811865476, [0, 0.7071067811865476], 0, 0]})");
  const ScenarioConfig c = load_config(f.path.string());
  CHECK(c.initial_label == "custom");
  CHECK(c.initial[0] == Complex(0.7071067811865476, 0));
  CHECK(c.initial[1] == Complex(0, 0.7071067811865476));
  CHECK_NOTHROW(validate_config(c));
}

TEST_CASE("config rejects malformed documents and unknown fields") {
  CHECK_THROWS_AS(load_config("/nonexistent/path.json"), ConfigError);

  TempFile bad_json("cfg-badjson");
  write_file(bad_json, "{ not json");
  CHECK_THROWS_AS(load_config(bad_json.path.string()), ConfigError);

  TempFile array_root("cfg-array");
  write_file(array_root, "[1, 2]");
  CHECK_THROWS_AS(load_config(array_root.path.string()), ConfigError);

  TempFile unknown("cfg-unknown");
  write_file(unknown, R"({"gamm": 1.0})");
  CHECK_THROWS_AS(load_config(unknown.path.string()), ConfigError);

  TempFile wrong_type("cfg-type");
  write_file(wrong_type, R"({"gamma": "strong"})");
  CHECK_THROWS_AS(load_config(wrong_type.path.string()), ConfigError);

  TempFile bad_label("cfg-label");
  write_file(bad_label, R"({"initial_state": "gg"})");
  CHECK_THROWS_AS(load_config(bad_label.path.string()), ConfigError);

  TempFile bad_res("cfg-res");
  write_file(bad_res, R"({"resolution": [5]})");
  CHECK_THROWS_AS(load_config(bad_res.path.string()), ConfigError);
}

TEST_CASE("validation rejects unusable scenarios") {
  ScenarioConfig c;
  c.t_max = 0.0;
  CHECK_THROWS_AS(validate_config(c), ConfigError);

  c = ScenarioConfig{};
  c.n_samples = 1;
  CHECK_THROWS_AS(validate_config(c), ConfigError);

  c = ScenarioConfig{};
  c.format = "xml";
  CHECK_THROWS_AS(validate_config(c), ConfigError);

  c = ScenarioConfig{};
  c.initial = {Complex(1, 0), Complex(1, 0), 0, 0};  // norm sqrt(2)
  CHECK_THROWS_AS(validate_config(c), ConfigError);

  c = ScenarioConfig{};
  c.params.gamma1 = -1.0;
  CHECK_THROWS_AS(validate_config(c), ConfigError);
}

TEST_CASE("flag overrides beat config values") {
  ScenarioConfig c = quick_config(0.5, 20.0, 2001);
  ConfigOverrides o;
  o.gamma = 2.0;
  o.omega = 1.0;
  o.j = 8.0;
  o.alpha = 0.1;
  o.delta = -0.2;
  o.t_max = 5.0;
  o.n_samples = 11;
  o.method = "rk";
  o.out_path = "y.csv";
  o.format = "json";
  o.initial = "ee";
  o.ep_lo = 0.3;
  o.ep_hi = 2.0;
  apply_overrides(c, o);
  CHECK(c.params.gamma1 == 2.0);
  CHECK(c.params.gamma2 == 2.0);
  CHECK(c.params.omega2 == 1.0);
  CHECK(c.params.J == 8.0);
  CHECK(c.params.alpha2 == 0.1);
  CHECK(c.params.delta1 == -0.2);
  CHECK(c.t_max == 5.0);
  CHECK(c.n_samples == 11);
  CHECK(c.method == Method::rk);
  CHECK(c.out_path == "y.csv");
  CHECK(c.format == "json");
  CHECK(c.initial_label == "ee");
  CHECK(c.initial[3] == Complex(1, 0));
  CHECK(c.ep_lo == 0.3);
  CHECK(c.ep_hi == 2.0);

  ConfigOverrides bad;
  bad.method = "verlet";
  CHECK_THROWS_AS(apply_overrides(c, bad), ConfigError);
}

TEST_CASE("evolve emits the documented columns with a full parameter echo") {
  const CommandResult r = cmd_evolve(quick_config(0.5, 2.0, 21));
  REQUIRE(r.tables.size() == 1);
  const ResultTable& t = r.tables[0];
  CHECK(t.columns == std::vector<std::string>{"t", "P1", "P2", "P3", "P4", "norm", "concurrence"});
  REQUIRE(t.rows.size() == 21);
  CHECK(t.rows[0][0] == "0.00000000000e+00");
  CHECK(t.rows[0][5] == "1.00000000000e+00");

  for (const char* key :
       {"command", "version", "delta1", "delta2", "gamma1", "gamma2", "omega1", "omega2", "j",
        "alpha1", "alpha2", "initial_state", "t_max", "n_samples", "method", "rk_rel_tol",
        "rk_abs_tol", "decay_cutoff", "truncated"})
    CHECK(meta_get(r.metadata, key) != std::string("<missing:") + key + ">");
  CHECK(meta_get(r.metadata, "command") == "evolve");
  CHECK(meta_get(r.metadata, "version") == kVersion);
  CHECK(meta_get(r.metadata, "gamma1") == "5.00000000000e-01");
  CHECK(meta_get(r.metadata, "initial_state") == "ff");
  CHECK(meta_get(r.metadata, "truncated") == "false");
  CHECK_FALSE(r.numerical_failure);
}

TEST_CASE("concurrence column shows the oscillation/stabilization dichotomy") {
  const CommandResult slow = cmd_evolve(quick_config(0.5, 20.0, 2001));
  const auto c_slow = column(slow.tables[0], "concurrence");
  const auto half_max = *std::max_element(c_slow.begin() + 1000, c_slow.end());
  const auto half_min = *std::min_element(c_slow.begin() + 1000, c_slow.end());
  CHECK(half_max - half_min > 0.5);

  const CommandResult fast = cmd_evolve(quick_config(1.5, 20.0, 2001));
  const auto c_fast = column(fast.tables[0], "concurrence");
  const auto q_max = *std::max_element(c_fast.begin() + 1500, c_fast.end());
  const auto q_min = *std::min_element(c_fast.begin() + 1500, c_fast.end());
  CHECK(q_max - q_min < 0.05);
  CHECK(q_max > 0.5);  // the plateau sits near 0.59
}

TEST_CASE("master with no jump channel matches evolve") {
  ScenarioConfig c = quick_config(0.5, 20.0, 201);
  const CommandResult pure = cmd_evolve(c);
  const CommandResult mixed = cmd_master(c);
  CHECK(mixed.tables[0].columns ==
        std::vector<std::string>{"t", "P", "P1", "P2", "P3", "P4", "concurrence_mixed"});

  const auto norm = column(pure.tables[0], "norm");
  const auto p = column(mixed.tables[0], "P");
  for (const std::string col : {"t", "P1", "P2", "P3", "P4"}) {
    const auto a = column(pure.tables[0], col);
    const auto b = column(mixed.tables[0], col);
    for (size_t k = 0; k < a.size(); ++k) CHECK(std::abs(a[k] - b[k]) < 1e-6);
  }
  const auto ca = column(pure.tables[0], "concurrence");
  const auto cb = column(mixed.tables[0], "concurrence_mixed");
  for (size_t k = 0; k < ca.size(); ++k) {
    CHECK(std::abs(ca[k] - cb[k]) < 1e-6);
    CHECK(std::abs(p[k] - norm[k] * norm[k]) < 1e-6);
  }
}

TEST_CASE("identical configs produce byte-identical output") {
  const ScenarioConfig c = quick_config(0.7, 5.0, 51);
  std::ostringstream a, b;
  write_csv(a, cmd_evolve(c).metadata, cmd_evolve(c).tables);
  write_csv(b, cmd_evolve(c).metadata, cmd_evolve(c).tables);
  CHECK(a.str() == b.str());
  CHECK(!a.str().empty());

  ScenarioConfig sc = quick_config(0.5, 1.0, 2);
  sc.spec_points = 11;
  std::ostringstream sa, sb;
  write_csv(sa, cmd_spectrum(sc).metadata, cmd_spectrum(sc).tables);
  write_csv(sb, cmd_spectrum(sc).metadata, cmd_spectrum(sc).tables);
  CHECK(sa.str() == sb.str());
}

TEST_CASE("numbers are printed to 12 significant digits with no negative zero") {
  CHECK(format_number(0.0) == "0.00000000000e+00");
  CHECK(format_number(-0.0) == "0.00000000000e+00");
  CHECK(format_number(1.0) == "1.00000000000e+00");
  CHECK(format_number(-0.0025) == "-2.50000000000e-03");
  CHECK(format_number(0.977309144) == "9.77309144000e-01");
}

TEST_CASE("csv output carries metadata lines above the header") {
  const CommandResult r = cmd_evolve(quick_config(0.5, 1.0, 3));
  std::ostringstream os;
  write_csv(os, r.metadata, r.tables);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "# command = evolve");
  size_t meta_lines = 1;
  while (std::getline(in, line) && !line.empty() && line[0] == '#') ++meta_lines;
  CHECK(meta_lines == r.metadata.size());
  CHECK(line == "t,P1,P2,P3,P4,norm,concurrence");
  std::getline(in, line);
  CHECK(line.substr(0, 17) == "0.00000000000e+00");
  CHECK(std::count(line.begin(), line.end(), ',') == 6);
}

TEST_CASE("json output mirrors the tables with numeric cells") {
  const CommandResult r = cmd_evolve(quick_config(0.5, 1.0, 3));
  std::ostringstream os;
  write_json(os, r.metadata, r.tables);
  const auto doc = nlohmann::json::parse(os.str());
  CHECK(doc.at("metadata").at("command") == "evolve");
  CHECK(doc.at("metadata").at("gamma1") == "5.00000000000e-01");
  const auto& table = doc.at("tables").at("results");
  CHECK(table.at("columns").size() == 7);
  REQUIRE(table.at("rows").size() == 3);
  CHECK(table.at("rows")[0][0].is_number());
  CHECK(table.at("rows")[0][5].get<double>() == doctest::Approx(1.0));
}

TEST_CASE("spectrum sweep tracks branches and labels phases") {
  ScenarioConfig c;
  c.spec_gamma_lo = 0.0;
  c.spec_gamma_hi = 3.0;
  c.spec_points = 61;
  const CommandResult r = cmd_spectrum(c);
  const ResultTable& t = r.tables[0];
  CHECK(t.columns == std::vector<std::string>{"gamma", "re1", "re2", "re3", "re4", "im1", "im2",
                                              "im3", "im4", "max_im_spread", "phase_label"});
  REQUIRE(t.rows.size() == 61);

  // Lossless row: all imaginary parts vanish.
  for (int col = 5; col <= 8; ++col) CHECK(std::abs(std::stod(t.rows[0][col])) < 1e-12);
  CHECK(std::stod(t.rows[0][9]) < 1e-12);
  CHECK(t.rows[0][10] == "unbroken");
  CHECK(t.rows[60][10] == "broken");

  // The branch starting at -10 is pinned there for every gamma; continuity
  // tracking must not swap it even while other branches cross.
  const auto re1 = column(t, "re1");
  for (const double v : re1) CHECK(std::abs(v + 10.0) < 0.02);

  int flips = 0;
  for (size_t k = 1; k < t.rows.size(); ++k)
    if (t.rows[k][10] != t.rows[k - 1][10]) ++flips;
  CHECK(flips == 1);

  // No column may jump by more than the sweep can explain between samples.
  for (const char* name : {"re1", "re2", "re3", "re4", "im1", "im2", "im3", "im4"}) {
    const auto vals = column(t, name);
    for (size_t k = 1; k < vals.size(); ++k) CHECK(std::abs(vals[k] - vals[k - 1]) < 0.6);
  }

  CHECK(meta_get(r.metadata, "failed_points") == "none");
  CHECK(meta_get(r.metadata, "n_points") == "61");

  ScenarioConfig bad = c;
  bad.spec_gamma_hi = -1.0;
  CHECK_THROWS_AS(cmd_spectrum(bad), ConfigError);
  bad = c;
  bad.spec_points = 1;
  CHECK_THROWS_AS(cmd_spectrum(bad), ConfigError);
}

TEST_CASE("phase-diagram emits cell labels plus a boundary table") {
  ScenarioConfig c;
  c.pd_omega_lo = 1.6;
  c.pd_omega_hi = 5.0;
  c.pd_n_omega = 2;
  c.pd_gamma_lo = 0.5;
  c.pd_gamma_hi = 1.5;
  c.pd_n_gamma = 3;
  const CommandResult r = cmd_phase_diagram(c);
  REQUIRE(r.tables.size() == 2);
  CHECK(r.tables[0].name == "cells");
  CHECK(r.tables[1].name == "ep_boundary");
  CHECK(r.tables[0].columns == std::vector<std::string>{"omega", "gamma", "label"});
  REQUIRE(r.tables[0].rows.size() == 6);

  const std::string omega_ref = format_number(1.6);
  for (const auto& row : r.tables[0].rows) {
    CHECK((row[2] == "unbroken" || row[2] == "broken"));
    if (row[0] == omega_ref && row[1] == format_number(0.5)) CHECK(row[2] == "unbroken");
    if (row[0] == omega_ref && row[1] == format_number(1.5)) CHECK(row[2] == "broken");
  }

  bool found = false;
  for (const auto& row : r.tables[1].rows)
    if (row[0] == omega_ref) {
      found = true;
      CHECK(std::stod(row[1]) == doctest::Approx(0.977309144).epsilon(1e-3));
    }
  CHECK(found);
}

TEST_CASE("ep command reports the bisected location") {
  ScenarioConfig c;
  c.ep_lo = 0.1;
  c.ep_hi = 3.0;
  const CommandResult r = cmd_ep(c);
  REQUIRE(r.tables.size() == 1);
  CHECK(r.tables[0].columns == std::vector<std::string>{"gamma_ep", "min_gap", "iterations"});
  REQUIRE(r.tables[0].rows.size() == 1);
  CHECK(std::stod(r.tables[0].rows[0][0]) == doctest::Approx(0.977309144).epsilon(2e-6));
  CHECK(r.tables[0].rows[0][2] == "22");
  CHECK(meta_get(r.metadata, "bracket") == "[1.00000000000e-01,3.00000000000e+00]");

  ScenarioConfig both_broken = c;
  both_broken.ep_lo = 1.5;
  CHECK_THROWS_AS(cmd_ep(both_broken), ConfigError);
  ScenarioConfig reversed = c;
  reversed.ep_lo = 3.0;
  reversed.ep_hi = 0.1;
  CHECK_THROWS_AS(cmd_ep(reversed), ConfigError);
}

TEST_CASE("run_command writes the output file and maps failures to exit 3") {
  TempFile out("run-out");
  ScenarioConfig ok = quick_config(0.5, 1.0, 5);
  ok.out_path = out.path.string();
  CHECK(run_command("evolve", ok) == 0);
  std::ifstream in(out.path);
  std::string first;
  std::getline(in, first);
  CHECK(first == "# command = evolve");

  // Fast full decay: the trajectory stops early, the partial table is still
  // written, and the run reports a numerical failure.
  TempFile out2("run-trunc");
  ScenarioConfig doomed = quick_config(10.0, 20.0, 201);
  doomed.params.set_omega(0.0);
  doomed.params.J = 0.0;
  doomed.out_path = out2.path.string();
  CHECK(run_command("evolve", doomed) == 3);
  std::ifstream in2(out2.path);
  std::string text((std::istreambuf_iterator<char>(in2)), std::istreambuf_iterator<char>());
  CHECK(text.find("# truncated = true") != std::string::npos);
  CHECK(text.find("# last_sample_time = ") != std::string::npos);

  CHECK_THROWS_AS(run_command("render", ok), ConfigError);
}

TEST_CASE("phase-diagram csv separates its tables with named markers") {
  ScenarioConfig c;
  c.pd_omega_lo = 1.0;
  c.pd_omega_hi = 2.0;
  c.pd_n_omega = 2;
  c.pd_gamma_lo = 0.5;
  c.pd_gamma_hi = 1.5;
  c.pd_n_gamma = 2;
  const CommandResult r = cmd_phase_diagram(c);
  std::ostringstream os;
  write_csv(os, r.metadata, r.tables);
  CHECK(os.str().find("# table: cells") != std::string::npos);
  CHECK(os.str().find("# table: ep_boundary") != std::string::npos);
}

}  // TEST_SUITE
