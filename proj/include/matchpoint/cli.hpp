#pragma once

// Command-line front end: ingest, simulate, sweep, analyze, validate.

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace matchpoint {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,
  kExitSchema = 3,
  kExitData = 4,
  kExitInternal = 5,
};

// args excludes the program name. Failures print one JSON line to `err`:
// {"error": kind, "exit_code": n, "message": text}.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// For the help-parse test: long flags registered per subcommand ("" is the
// top level), and the rendered help text of one subcommand.
std::map<std::string, std::vector<std::string>> registered_flags();
std::string help_text(const std::string& subcommand);

}  // namespace matchpoint
