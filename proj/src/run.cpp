#include "mesojj/run.hpp"

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "mesojj/dynamics.hpp"
#include "mesojj/errors.hpp"
#include "mesojj/sweep.hpp"

namespace mesojj {

using ordered_json = nlohmann::ordered_json;

Command parse_command(const std::string& name) {
  if (name == "solve") return Command::Solve;
  if (name == "params") return Command::Params;
  if (name == "sweep") return Command::Sweep;
  if (name == "dynamics") return Command::Dynamics;
  if (name == "fit") return Command::Fit;
  throw ConfigError("unknown command '" + name +
                    "' (expected solve, params, sweep, dynamics, or fit)");
}

namespace {

std::string command_name(Command command) {
  switch (command) {
    case Command::Solve: return "solve";
    case Command::Params: return "params";
    case Command::Sweep: return "sweep";
    case Command::Dynamics: return "dynamics";
    case Command::Fit: return "fit";
  }
  return "?";
}

std::vector<double> linspace(double lo, double hi, int count) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  if (count == 1) {
    out.push_back(lo);
    return out;
  }
  for (int i = 0; i < count; ++i)
    out.push_back(lo + (hi - lo) * static_cast<double>(i) / (count - 1));
  return out;
}

void emit(ReportBundle& bundle, const std::string& name, const std::string& bytes) {
  bundle.files.push_back(write_file(bundle.out_dir + "/" + name, bytes));
}

ordered_json geometry_json(const Geometry& g) {
  ordered_json j;
  j["kind"] = g.kind == GeometryKind::SemiInfinite ? "semi_infinite" : "finite_islands";
  j["gap"] = g.gap;
  if (g.kind == GeometryKind::FiniteIslands) j["island"] = g.island;
  return j;
}

ordered_json fit_json(const FitCoefficients& f) {
  ordered_json j;
  j["a"] = f.a;
  j["b"] = f.b;
  j["c"] = f.c;
  j["rms_residual"] = f.rms_residual;
  return j;
}

PlotSeries nan_filtered_series(std::string label, std::string color,
                               const std::vector<double>& x, const std::vector<double>& y) {
  PlotSeries s;
  s.label = std::move(label);
  s.color = std::move(color);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (std::isfinite(y[i])) {
      s.x.push_back(x[i]);
      s.y.push_back(y[i]);
    }
  }
  return s;
}

void run_solve(const RunConfig& config, const Grid& grid, ReportBundle& bundle) {
  const ParityPair pair = solve_pair(config.geometry, grid, config.solver);
  const FullLineBasis basis = left_right_basis(pair);

  bundle.notes.push_back("even parity: " + std::to_string(pair.even.iterations) +
                         " iterations, residual " + format_double(pair.even.residual_norm));
  bundle.notes.push_back("odd parity: " + std::to_string(pair.odd.iterations) +
                         " iterations, residual " + format_double(pair.odd.residual_norm));

  if (config.emit_csv) {
    CsvTable table;
    table.header = {"x_bar", "psi_plus", "psi_minus", "v_plus", "v_minus"};
    for (std::size_t i = 0; i < basis.x.size(); ++i)
      table.rows.push_back({format_double(basis.x[i]), format_double(basis.psi_even[i]),
                            format_double(basis.psi_odd[i]), format_double(basis.v_even[i]),
                            format_double(basis.v_odd[i])});
    emit(bundle, "parity_states.csv", table.to_string());
  }

  if (config.emit_json) {
    ordered_json j;
    j["geometry"] = geometry_json(config.geometry);
    j["grid"] = {{"x_max", grid.x_max}, {"dx", grid.dx}, {"nodes", grid.size()}};
    for (const ParitySolution* sol : {&pair.even, &pair.odd}) {
      ordered_json s;
      s["iterations"] = sol->iterations;
      s["residual_norm"] = sol->residual_norm;
      s["converged"] = sol->converged;
      s["psi_at_zero"] = sol->psi.front();
      s["v_at_zero"] = sol->v.front();
      j[sol->parity == Parity::Even ? "even" : "odd"] = s;
    }
    emit(bundle, "solve.json", j.dump(2) + "\n");
  }

  if (config.emit_svg) {
    PlotSpec waves;
    waves.title = "Parity wavefunctions";
    waves.x_label = "x / xi";
    waves.y_label = "psi / sqrt(n_s)";
    waves.series.push_back({"psi_plus", "#1f6fb2", false, basis.x, basis.psi_even});
    waves.series.push_back({"psi_minus", "#d1495b", false, basis.x, basis.psi_odd});
    emit(bundle, "wavefunctions.svg", render_plot(waves));

    PlotSpec pots;
    pots.title = "Self-consistent potentials";
    pots.x_label = "x / xi";
    pots.y_label = "v (scaled)";
    pots.series.push_back({"v_plus", "#1f6fb2", false, basis.x, basis.v_even});
    pots.series.push_back({"v_minus", "#d1495b", false, basis.x, basis.v_odd});
    emit(bundle, "potentials.svg", render_plot(pots));
  }
}

void run_params(const RunConfig& config, const Grid& grid, ReportBundle& bundle) {
  const ParityPair pair = solve_pair(config.geometry, grid, config.solver);
  const JunctionParams params = extract_junction_params(pair);
  const ScaleSet scales = derive_scales(config.material);

  ordered_json j;
  ordered_json u;
  u["k1_bar"] = params.k1_bar;
  u["k2_bar"] = params.k2_bar;
  u["ej1_bar"] = params.ej1_bar;
  u["ej2_bar"] = params.ej2_bar;
  u["ej1_dual_bar"] = params.ej1_dual_bar;
  u["ej2_dual_bar"] = params.ej2_dual_bar;
  u["eplus_bar"] = params.eplus_bar;
  u["eminus_bar"] = params.eminus_bar;
  u["ic1_bar"] = params.ic1_bar;
  u["ic2_bar"] = params.ic2_bar;
  if (params.c_j_bar) {
    u["c_j_bar"] = *params.c_j_bar;
    u["d_bar"] = *params.d_bar;
    u["norm_bar"] = *params.norm_bar;
  }
  j["unitless"] = u;

  const double e0 = scales.energy_prefactor;
  ordered_json p;
  p["ej1_joule"] = params.ej1_bar * e0;
  p["ej2_joule"] = params.ej2_bar * e0;
  p["eplus_joule"] = params.eplus_bar * e0;
  p["eminus_joule"] = params.eminus_bar * e0;
  p["ic1_ampere"] = params.ic1_bar * scales.current_prefactor;
  p["ic2_ampere"] = params.ic2_bar * scales.current_prefactor;
  if (params.c_j_bar) {
    p["d_meter"] = *params.d_bar * scales.xi;
    const double nb = *params.norm_bar;
    p["charging_energy_joule"] = nb * nb / (16.0 * *params.c_j_bar) * e0;
  }
  j["physical"] = p;

  ordered_json s;
  s["lambda_l_meter"] = scales.lambda_l;
  s["lambda_c_meter"] = scales.lambda_c;
  s["xi_meter"] = scales.xi;
  s["current_prefactor_ampere"] = scales.current_prefactor;
  s["energy_prefactor_joule"] = scales.energy_prefactor;
  j["scales"] = s;

  if (params.ej1_bar > 0 && params.ej2_bar < 0) {
    const GroundState g = classify_ground_state(params.ej1_bar, params.ej2_bar);
    ordered_json gj;
    gj["trivial"] = g.trivial;
    gj["degenerate"] = g.degenerate;
    gj["phi_star"] = g.phi_star;
    j["ground_state"] = gj;
    bundle.notes.push_back(g.trivial ? "ground state: phi* = 0"
                                     : "ground state: phi* = " + format_double(g.phi_star));
  }

  if (config.geometry.kind == GeometryKind::FiniteIslands) {
    const QubitExpansion q = qubit_expansion(params, config.drive);
    ordered_json qj;
    qj["charging"] = q.charging;
    qj["dipole"] = q.dipole;
    qj["ej1"] = q.ej1;
    qj["ej2"] = q.ej2;
    qj["charging_dominant"] = q.charging_dominant;
    qj["report"] = q.report;
    j["qubit"] = qj;
    bundle.notes.push_back(q.charging_dominant ? "charging term dominates the tunneling corrections"
                                               : "tunneling corrections are not negligible");
  }

  if (config.emit_json) emit(bundle, "junction_params.json", j.dump(2) + "\n");

  if (config.emit_svg) {
    // current-phase relation over one period
    std::vector<double> phis, currents;
    for (int i = 0; i <= 400; ++i) {
      const double phi = -M_PI + 2.0 * M_PI * i / 400.0;
      phis.push_back(phi);
      currents.push_back(cpr_current(phi, params.ic1_bar, params.ic2_bar));
    }
    PlotSpec spec;
    spec.title = "Current-phase relation";
    spec.x_label = "phi";
    spec.y_label = "i / i0";
    spec.series.push_back({"i(phi)", "#1f6fb2", false, phis, currents});
    emit(bundle, "cpr.svg", render_plot(spec));
  }
}

void run_sweep_command(const RunConfig& config, const Grid& grid, ReportBundle& bundle) {
  const std::vector<double> l_values =
      linspace(config.sweep_l_min, config.sweep_l_max, config.sweep_count);

  SweepOptions opts;
  opts.warm_start = config.sweep_warm_start;
  if (const char* env = std::getenv("MESOJJ_THREADS")) opts.threads = std::atoi(env);

  const SweepResult result = run_sweep(l_values, config.geometry, grid, config.solver, opts);
  for (const auto& f : result.failures)
    bundle.notes.push_back("gap " + format_double(f.l_bar) + " failed: " + f.message);

  if (config.emit_csv) {
    CsvTable table;
    table.header = {"l_bar",   "ic1_bar",           "ic2_bar",    "ej1_bar",
                    "ej2_bar", "eminus_minus_eplus", "iterations", "residual_norm"};
    for (const auto& r : result.records)
      table.rows.push_back({format_double(r.l_bar), format_double(r.ic1_bar),
                            format_double(r.ic2_bar), format_double(r.ej1_bar),
                            format_double(r.ej2_bar), format_double(r.eminus_minus_eplus),
                            std::to_string(r.iterations), format_double(r.residual_norm)});
    emit(bundle, "sweep.csv", table.to_string());
  }

  // Fit ln|i| against the gap width for both harmonics. Points at exactly
  // zero current carry no log information and are dropped.
  std::vector<double> ls, i1, i2;
  for (const auto& r : result.records) {
    if (r.ic1_bar != 0.0 && r.ic2_bar != 0.0) {
      ls.push_back(r.l_bar);
      i1.push_back(std::abs(r.ic1_bar));
      i2.push_back(std::abs(r.ic2_bar));
    }
  }

  bool fitted = false;
  FitCoefficients f1, f2;
  if (ls.size() >= 3) {
    f1 = fit_log_quadratic(ls, i1);
    f2 = fit_log_quadratic(ls, i2);
    fitted = true;
    bundle.notes.push_back("ln|ic1| fit: a=" + format_double(f1.a) + " b=" + format_double(f1.b) +
                           " c=" + format_double(f1.c));
    bundle.notes.push_back("ln|ic2| fit: a=" + format_double(f2.a) + " b=" + format_double(f2.b) +
                           " c=" + format_double(f2.c));
    if (config.emit_json) {
      ordered_json j;
      j["ic1"] = fit_json(f1);
      j["ic2"] = fit_json(f2);
      emit(bundle, "fit.json", j.dump(2) + "\n");
    }
  } else {
    bundle.notes.push_back("fit skipped: fewer than 3 usable sweep points");
  }

  if (config.emit_svg && !ls.empty()) {
    PlotSpec spec;
    spec.title = "Critical currents vs gap width";
    spec.x_label = "L / xi";
    spec.y_label = "|i| / i0";
    spec.log_y = true;
    spec.series.push_back({"|ic1|", "#1f6fb2", false, ls, i1});
    spec.series.push_back({"|ic2|", "#d1495b", false, ls, i2});
    if (fitted) {
      const std::vector<double> dense = linspace(ls.front(), ls.back(), 200);
      PlotSeries s1{"ic1 fit", "#1f6fb2", true, dense, {}};
      PlotSeries s2{"ic2 fit", "#d1495b", true, dense, {}};
      for (double l : dense) {
        s1.y.push_back(extrapolate(f1, l));
        s2.y.push_back(extrapolate(f2, l));
      }
      spec.series.push_back(std::move(s1));
      spec.series.push_back(std::move(s2));
    }
    emit(bundle, "sweep.svg", render_plot(spec));
  }
}

void run_dynamics(const RunConfig& config, const Grid& grid, ReportBundle& bundle) {
  const ParityPair pair = solve_pair(config.geometry, grid, config.solver);
  const DynamicsParams dp = dynamics_params(extract_junction_params(pair));

  IntegrateOptions opts;
  opts.dt = config.dynamics_dt;
  opts.t_end = config.dynamics_t_end;

  Trajectory traj;
  const MadelungState init{config.dynamics_n0, config.dynamics_phi0};
  switch (config.dynamics_form) {
    case StateForm::Complex:
      traj = integrate(to_two_mode(init), dp, config.drive, opts);
      break;
    case StateForm::Madelung:
      traj = integrate(init, dp, config.drive, opts);
      break;
    case StateForm::ChargeFlux:
      traj = integrate(ChargeFluxState{init.n, init.phi}, dp, config.drive, opts);
      break;
  }

  double energy_drift = 0, norm_drift = 0;
  for (std::size_t i = 0; i < traj.t.size(); ++i) {
    energy_drift = std::max(energy_drift, std::abs(traj.energy[i] - traj.energy.front()));
    if (!traj.norm.empty()) norm_drift = std::max(norm_drift, std::abs(traj.norm[i] - 1.0));
  }
  bundle.notes.push_back("energy drift " + format_double(energy_drift));
  if (!traj.norm.empty()) bundle.notes.push_back("norm drift " + format_double(norm_drift));

  if (config.emit_csv) {
    CsvTable table;
    table.header = {"t", "n", "phi", "norm", "energy"};
    for (std::size_t i = 0; i < traj.t.size(); ++i)
      table.rows.push_back({format_double(traj.t[i]), format_double(traj.n[i]),
                            format_double(traj.phi[i]),
                            format_double(traj.norm.empty() ? 1.0 : traj.norm[i]),
                            format_double(traj.energy[i])});
    emit(bundle, "trajectory.csv", table.to_string());
  }

  if (config.emit_json) {
    ordered_json j;
    switch (config.dynamics_form) {
      case StateForm::Complex: j["form"] = "complex"; break;
      case StateForm::Madelung: j["form"] = "madelung"; break;
      case StateForm::ChargeFlux: j["form"] = "charge_flux"; break;
    }
    j["dt"] = opts.dt;
    j["t_end"] = opts.t_end;
    j["samples"] = traj.t.size();
    j["energy_drift"] = energy_drift;
    if (!traj.norm.empty()) j["norm_drift"] = norm_drift;
    j["final"] = {{"n", traj.n.back()},
                  {"phi", std::isfinite(traj.phi.back()) ? ordered_json(traj.phi.back())
                                                         : ordered_json(nullptr)}};
    emit(bundle, "dynamics.json", j.dump(2) + "\n");
  }

  if (config.emit_svg) {
    PlotSpec spec;
    spec.title = "Two-mode trajectory";
    spec.x_label = "t (scaled)";
    spec.y_label = "n, phi";
    spec.series.push_back(nan_filtered_series("n", "#1f6fb2", traj.t, traj.n));
    spec.series.push_back(nan_filtered_series("phi", "#d1495b", traj.t, traj.phi));
    emit(bundle, "trajectory.svg", render_plot(spec));
  }
}

void run_fit(const RunConfig& config, ReportBundle& bundle) {
  if (config.fit_input.empty())
    throw ConfigError("fit: no input CSV configured ([fit] input = path)");
  const std::string text = read_file(config.fit_input);

  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) lines.push_back(cur);
  if (lines.empty()) throw ConfigError("fit: " + config.fit_input + " is empty");

  const std::vector<std::string> header = csv_split_line(lines.front());
  auto column = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw ConfigError("fit: " + config.fit_input + " has no '" + name + "' column");
  };
  const std::size_t col_l = column("l_bar");
  const std::size_t col_i1 = column("ic1_bar");
  const std::size_t col_i2 = column("ic2_bar");

  std::vector<double> ls, i1, i2;
  for (std::size_t row = 1; row < lines.size(); ++row) {
    if (lines[row].empty()) continue;
    const std::vector<std::string> cells = csv_split_line(lines[row]);
    if (cells.size() != header.size())
      throw ConfigError("fit: row " + std::to_string(row + 1) + " has " +
                        std::to_string(cells.size()) + " cells, header has " +
                        std::to_string(header.size()));
    auto cell_number = [&](std::size_t col) {
      try {
        std::size_t used = 0;
        const double v = std::stod(cells[col], &used);
        if (used != cells[col].size()) throw std::invalid_argument("trailing junk");
        return v;
      } catch (const std::exception&) {
        throw ConfigError("fit: non-numeric value '" + cells[col] + "' at row " +
                          std::to_string(row + 1));
      }
    };
    ls.push_back(cell_number(col_l));
    i1.push_back(std::abs(cell_number(col_i1)));
    i2.push_back(std::abs(cell_number(col_i2)));
  }

  const FitCoefficients f1 = fit_log_quadratic(ls, i1);
  const FitCoefficients f2 = fit_log_quadratic(ls, i2);
  bundle.notes.push_back("ln|ic1| fit: a=" + format_double(f1.a) + " b=" + format_double(f1.b) +
                         " c=" + format_double(f1.c));
  bundle.notes.push_back("ln|ic2| fit: a=" + format_double(f2.a) + " b=" + format_double(f2.b) +
                         " c=" + format_double(f2.c));

  ordered_json j;
  j["input"] = config.fit_input;
  j["points"] = ls.size();
  j["ic1"] = fit_json(f1);
  j["ic2"] = fit_json(f2);
  emit(bundle, "fit.json", j.dump(2) + "\n");
}

}  // namespace

ReportBundle run_command(Command command, const RunConfig& config) {
  ReportBundle bundle;
  bundle.command = command_name(command);
  bundle.out_dir = config.out_dir;

  const Grid grid = build_grid(config.grid_x_max, config.grid_dx);
  switch (command) {
    case Command::Solve: run_solve(config, grid, bundle); break;
    case Command::Params: run_params(config, grid, bundle); break;
    case Command::Sweep: run_sweep_command(config, grid, bundle); break;
    case Command::Dynamics: run_dynamics(config, grid, bundle); break;
    case Command::Fit: run_fit(config, bundle); break;
  }

  ordered_json report;
  report["command"] = bundle.command;
  report["out_dir"] = bundle.out_dir;
  report["files"] = ordered_json::array();
  for (const auto& f : bundle.files)
    report["files"].push_back({{"path", f.path}, {"checksum", f.checksum}});
  report["notes"] = bundle.notes;
  bundle.files.push_back(
      write_file(bundle.out_dir + "/report.json", report.dump(2) + "\n"));
  return bundle;
}

int cli_main(const std::vector<std::string>& args) {
  CLI::App app{"two-electrode condensate junction simulator"};
  app.name("mesojj");
  std::string command_word, config_path, out_override;
  app.add_option("command", command_word, "solve | params | sweep | dynamics | fit")->required();
  app.add_option("-c,--config", config_path, "INI config file (defaults apply when omitted)");
  app.add_option("-o,--out", out_override, "output directory (overrides the config)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    RunConfig config = config_path.empty() ? RunConfig{} : load_config_file(config_path);
    if (!out_override.empty()) config.out_dir = out_override;
    const Command command = parse_command(command_word);
    const ReportBundle bundle = run_command(command, config);
    std::cout << bundle.command << ": wrote " << bundle.files.size() << " file(s) to "
              << bundle.out_dir << "\n";
    for (const auto& f : bundle.files) std::cout << "  " << f.path << "  " << f.checksum << "\n";
    for (const auto& n : bundle.notes) std::cout << "note: " << n << "\n";
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const GeometryError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << " (residual " << format_double(e.residual_norm)
              << " after " << e.iterations << " iterations)\n";
    return 3;
  } catch (const NumericsError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const SingularityError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace mesojj
