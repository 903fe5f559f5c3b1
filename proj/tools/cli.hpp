#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace qdesign::cli {

struct CommandResult {
  int exit_status = 0;
  std::string text;                   // human-readable table
  std::optional<nlohmann::json> json;  // machine-readable body
  std::string log;                    // diagnostics for stderr
  bool json_requested = false;
};

/// Runs one command line (without the program name).
CommandResult run(const std::vector<std::string>& args);

/// What the executable prints on stdout: the JSON body when --json was
/// given, the table otherwise.
std::string render(const CommandResult& r);

}  // namespace qdesign::cli
