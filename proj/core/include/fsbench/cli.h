#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fsbench/experiment.h"

namespace fsbench {

// Accepts True/False/true/1/0/yes/no, case-insensitively.
bool parse_bool_flag(const std::string& text);

// Parses the fsbench command line. Throws Error("cli.usage", ...) on bad
// input; sets *help_requested and returns defaults for --help.
ExperimentConfig parse_command_line(const std::vector<std::string>& args,
                                    bool* help_requested = nullptr,
                                    std::string* help_text = nullptr);

// Entry point of the fsbench tool. Errors are printed to `err` as one JSON
// object {"error": code, "message": ...} and mapped to a nonzero status.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fsbench
