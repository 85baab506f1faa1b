#pragma once

#include <string>

#include "mesojj/dynamics.hpp"
#include "mesojj/sweep.hpp"

namespace mesojj {

// Full run description, filled from an INI-style config file. Every field
// has a default so an empty file is a valid config.
struct RunConfig {
  MaterialSpec material;
  Geometry geometry;

  double grid_x_max = 100.0;
  double grid_dx = 0.25;

  SolverOptions solver;

  double sweep_l_min = 0.0;
  double sweep_l_max = 40.0;
  int sweep_count = 21;
  bool sweep_warm_start = true;

  StateForm dynamics_form = StateForm::Complex;
  double dynamics_n0 = 0.0;
  double dynamics_phi0 = 0.0;
  double dynamics_dt = 1e-3;
  double dynamics_t_end = 10.0;
  DriveSpec drive;

  std::string fit_input;  // sweep CSV consumed by the fit command

  std::string out_dir = "out";
  bool emit_csv = true;
  bool emit_json = true;
  bool emit_svg = true;

  bool operator==(const RunConfig& other) const;
};

// Parses the INI text. Unknown sections or keys, malformed values, and
// constraint violations are ConfigErrors carrying the line number.
RunConfig parse_config(const std::string& text);

// Inverse of parse_config up to formatting: parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& config);

RunConfig load_config_file(const std::string& path);  // IoError on read failure

}  // namespace mesojj
