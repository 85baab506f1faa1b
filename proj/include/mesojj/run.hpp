#pragma once

#include <string>
#include <vector>

#include "mesojj/config.hpp"
#include "mesojj/io.hpp"

namespace mesojj {

enum class Command { Solve, Params, Sweep, Dynamics, Fit };

Command parse_command(const std::string& name);  // throws ConfigError

// Everything a command run leaves behind: emitted files with checksums and
// a few human-readable diagnostics. A report.json carrying the same data
// is always written to the output directory.
struct ReportBundle {
  std::string command;
  std::string out_dir;
  std::vector<FileEntry> files;
  std::vector<std::string> notes;
};

ReportBundle run_command(Command command, const RunConfig& config);

// argv-level entry: parses arguments, loads the config, runs, prints the
// report, and maps errors to the exit-code contract (0 ok, 2 config,
// 3 solver, 4 io). Exposed for tests.
int cli_main(const std::vector<std::string>& args);

}  // namespace mesojj
