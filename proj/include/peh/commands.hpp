#pragma once

#include <ostream>
#include <string>

#include "peh/errors.hpp"
#include "peh/report.hpp"

namespace peh::cli {

struct Outcome {
  int exit_code = 0;
  PipelineReport report;
};

// Directory of bundled fixtures: $PEH_FIXTURES if set, else the source tree's data/.
std::string fixtures_dir();
// An existing path as given, else a fixture name with or without extension.
std::string resolve_input(const std::string& input);
// 0 ok, 1 input error, 2 computation error.
int exit_code_for(ErrorKind k);

Outcome cmd_compute(const RunConfig& cfg);
Outcome cmd_limit(const RunConfig& cfg);
Outcome cmd_snf(const RunConfig& cfg);
Outcome cmd_validate(const RunConfig& cfg);
Outcome cmd_examples(const RunConfig& cfg);
Outcome run_command(const RunConfig& cfg);

// Full command line: parses flags, runs, writes the report, returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace peh::cli
