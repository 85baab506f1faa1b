#include "mesojj/config.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "mesojj/errors.hpp"
#include "mesojj/io.hpp"

namespace mesojj {

bool RunConfig::operator==(const RunConfig& other) const {
  return material.boson_charge == other.material.boson_charge &&
         material.boson_mass == other.material.boson_mass &&
         material.bulk_density == other.material.bulk_density &&
         material.cross_section == other.material.cross_section &&
         geometry.kind == other.geometry.kind && geometry.gap == other.geometry.gap &&
         geometry.island == other.geometry.island && grid_x_max == other.grid_x_max &&
         grid_dx == other.grid_dx && solver.tol == other.solver.tol &&
         solver.max_iter == other.solver.max_iter && solver.damping == other.solver.damping &&
         solver.psi_guess == other.solver.psi_guess && solver.v_guess == other.solver.v_guess &&
         sweep_l_min == other.sweep_l_min && sweep_l_max == other.sweep_l_max &&
         sweep_count == other.sweep_count && sweep_warm_start == other.sweep_warm_start &&
         dynamics_form == other.dynamics_form && dynamics_n0 == other.dynamics_n0 &&
         dynamics_phi0 == other.dynamics_phi0 && dynamics_dt == other.dynamics_dt &&
         dynamics_t_end == other.dynamics_t_end && drive.kind == other.drive.kind &&
         drive.amplitude == other.drive.amplitude && drive.frequency == other.drive.frequency &&
         drive.phase == other.drive.phase && fit_input == other.fit_input &&
         out_dir == other.out_dir && emit_csv == other.emit_csv && emit_json == other.emit_json &&
         emit_svg == other.emit_svg;
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

// Comments start at '#' or ';' when at the start of the line or after
// whitespace, so values may not contain either marker mid-token.
std::string strip_comment(const std::string& line) {
  for (std::size_t i = 0; i < line.size(); ++i) {
    if ((line[i] == '#' || line[i] == ';') &&
        (i == 0 || line[i - 1] == ' ' || line[i - 1] == '\t'))
      return line.substr(0, i);
  }
  return line;
}

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line_no) + ": " + what);
}

double parse_number(const std::string& value, const std::string& key, int line_no) {
  double out = 0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc{} || res.ptr != last)
    fail(line_no, "expected a number for '" + key + "', got '" + value + "'");
  return out;
}

int parse_int(const std::string& value, const std::string& key, int line_no) {
  int out = 0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto res = std::from_chars(first, last, out);
  if (res.ec != std::errc{} || res.ptr != last)
    fail(line_no, "expected an integer for '" + key + "', got '" + value + "'");
  return out;
}

bool parse_bool(const std::string& value, const std::string& key, int line_no) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  fail(line_no, "expected a boolean for '" + key + "', got '" + value + "'");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig config;
  std::istringstream stream(text);
  std::string raw;
  std::string section;
  int line_no = 0;

  while (std::getline(stream, raw)) {
    ++line_no;
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(line_no, "malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      if (section != "material" && section != "geometry" && section != "grid" &&
          section != "solver" && section != "sweep" && section != "dynamics" &&
          section != "drive" && section != "fit" && section != "output")
        fail(line_no, "unknown section [" + section + "]");
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value', got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail(line_no, "empty key");
    if (section.empty()) fail(line_no, "key '" + key + "' outside any section");

    auto unknown = [&] { fail(line_no, "unknown key '" + key + "' in [" + section + "]"); };

    if (section == "material") {
      if (key == "boson_charge") config.material.boson_charge = parse_number(value, key, line_no);
      else if (key == "boson_mass") config.material.boson_mass = parse_number(value, key, line_no);
      else if (key == "bulk_density") config.material.bulk_density = parse_number(value, key, line_no);
      else if (key == "cross_section") config.material.cross_section = parse_number(value, key, line_no);
      else unknown();
    } else if (section == "geometry") {
      if (key == "kind") {
        if (value == "semi_infinite") config.geometry.kind = GeometryKind::SemiInfinite;
        else if (value == "finite_islands") config.geometry.kind = GeometryKind::FiniteIslands;
        else fail(line_no, "kind must be semi_infinite or finite_islands, got '" + value + "'");
      } else if (key == "gap") config.geometry.gap = parse_number(value, key, line_no);
      else if (key == "island") config.geometry.island = parse_number(value, key, line_no);
      else unknown();
    } else if (section == "grid") {
      if (key == "x_max") config.grid_x_max = parse_number(value, key, line_no);
      else if (key == "dx") config.grid_dx = parse_number(value, key, line_no);
      else unknown();
    } else if (section == "solver") {
      if (key == "tol") config.solver.tol = parse_number(value, key, line_no);
      else if (key == "max_iter") config.solver.max_iter = parse_int(value, key, line_no);
      else if (key == "damping") config.solver.damping = parse_number(value, key, line_no);
      else unknown();
    } else if (section == "sweep") {
      if (key == "l_min") config.sweep_l_min = parse_number(value, key, line_no);
      else if (key == "l_max") config.sweep_l_max = parse_number(value, key, line_no);
      else if (key == "count") config.sweep_count = parse_int(value, key, line_no);
      else if (key == "warm_start") config.sweep_warm_start = parse_bool(value, key, line_no);
      else unknown();
    } else if (section == "dynamics") {
      if (key == "form") {
        if (value == "complex") config.dynamics_form = StateForm::Complex;
        else if (value == "madelung") config.dynamics_form = StateForm::Madelung;
        else if (value == "charge_flux") config.dynamics_form = StateForm::ChargeFlux;
        else fail(line_no, "form must be complex, madelung, or charge_flux, got '" + value + "'");
      } else if (key == "n0") config.dynamics_n0 = parse_number(value, key, line_no);
      else if (key == "phi0") config.dynamics_phi0 = parse_number(value, key, line_no);
      else if (key == "dt") config.dynamics_dt = parse_number(value, key, line_no);
      else if (key == "t_end") config.dynamics_t_end = parse_number(value, key, line_no);
      else unknown();
    } else if (section == "drive") {
      if (key == "kind") {
        if (value == "none") config.drive.kind = DriveSpec::Kind::None;
        else if (value == "constant") config.drive.kind = DriveSpec::Kind::Constant;
        else if (value == "sinusoid") config.drive.kind = DriveSpec::Kind::Sinusoid;
        else fail(line_no, "kind must be none, constant, or sinusoid, got '" + value + "'");
      } else if (key == "amplitude") config.drive.amplitude = parse_number(value, key, line_no);
      else if (key == "frequency") config.drive.frequency = parse_number(value, key, line_no);
      else if (key == "phase") config.drive.phase = parse_number(value, key, line_no);
      else unknown();
    } else if (section == "fit") {
      if (key == "input") config.fit_input = value;
      else unknown();
    } else {  // output
      if (key == "dir") config.out_dir = value;
      else if (key == "csv") config.emit_csv = parse_bool(value, key, line_no);
      else if (key == "json") config.emit_json = parse_bool(value, key, line_no);
      else if (key == "svg") config.emit_svg = parse_bool(value, key, line_no);
      else unknown();
    }
  }

  config.material.validate();
  config.geometry.validate();
  if (!(config.grid_x_max > 0) || !(config.grid_dx > 0))
    throw ConfigError("grid: x_max and dx must be positive");
  const double ratio = config.grid_x_max / config.grid_dx;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio))
    throw ConfigError("grid: x_max must be an integer multiple of dx");
  config.solver.validate(static_cast<std::size_t>(std::llround(ratio)) + 1);
  if (config.sweep_count < 1) throw ConfigError("sweep: count must be at least 1");
  if (config.sweep_l_min < 0) throw ConfigError("sweep: l_min must be non-negative");
  if (config.sweep_l_max < config.sweep_l_min)
    throw ConfigError("sweep: l_max must be at least l_min");
  if (!(config.dynamics_dt > 0)) throw ConfigError("dynamics: dt must be positive");
  if (!(config.dynamics_t_end > 0)) throw ConfigError("dynamics: t_end must be positive");
  if (std::abs(config.dynamics_n0) > 1.0)
    throw ConfigError("dynamics: n0 must lie in [-1, 1]");
  return config;
}

std::string serialize_config(const RunConfig& c) {
  std::string out;
  auto num = [&out](const std::string& key, double v) {
    out += key + " = " + format_double(v) + "\n";
  };
  auto text = [&out](const std::string& key, const std::string& v) {
    out += key + " = " + v + "\n";
  };
  auto flag = [&out](const std::string& key, bool v) {
    out += key + " = " + (v ? "true" : "false") + "\n";
  };

  out += "[material]\n";
  num("boson_charge", c.material.boson_charge);
  num("boson_mass", c.material.boson_mass);
  num("bulk_density", c.material.bulk_density);
  num("cross_section", c.material.cross_section);

  out += "\n[geometry]\n";
  text("kind", c.geometry.kind == GeometryKind::SemiInfinite ? "semi_infinite" : "finite_islands");
  num("gap", c.geometry.gap);
  num("island", c.geometry.island);

  out += "\n[grid]\n";
  num("x_max", c.grid_x_max);
  num("dx", c.grid_dx);

  out += "\n[solver]\n";
  num("tol", c.solver.tol);
  text("max_iter", std::to_string(c.solver.max_iter));
  num("damping", c.solver.damping);

  out += "\n[sweep]\n";
  num("l_min", c.sweep_l_min);
  num("l_max", c.sweep_l_max);
  text("count", std::to_string(c.sweep_count));
  flag("warm_start", c.sweep_warm_start);

  out += "\n[dynamics]\n";
  switch (c.dynamics_form) {
    case StateForm::Complex: text("form", "complex"); break;
    case StateForm::Madelung: text("form", "madelung"); break;
    case StateForm::ChargeFlux: text("form", "charge_flux"); break;
  }
  num("n0", c.dynamics_n0);
  num("phi0", c.dynamics_phi0);
  num("dt", c.dynamics_dt);
  num("t_end", c.dynamics_t_end);

  out += "\n[drive]\n";
  switch (c.drive.kind) {
    case DriveSpec::Kind::None: text("kind", "none"); break;
    case DriveSpec::Kind::Constant: text("kind", "constant"); break;
    case DriveSpec::Kind::Sinusoid: text("kind", "sinusoid"); break;
  }
  num("amplitude", c.drive.amplitude);
  num("frequency", c.drive.frequency);
  num("phase", c.drive.phase);

  if (!c.fit_input.empty()) {
    out += "\n[fit]\n";
    text("input", c.fit_input);
  }

  out += "\n[output]\n";
  text("dir", c.out_dir);
  flag("csv", c.emit_csv);
  flag("json", c.emit_json);
  flag("svg", c.emit_svg);
  return out;
}

RunConfig load_config_file(const std::string& path) { return parse_config(read_file(path)); }

}  // namespace mesojj
