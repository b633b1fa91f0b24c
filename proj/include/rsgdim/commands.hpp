#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace rsg {

struct CliOptions {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;  // overrides the config value
  std::optional<int> workers;         // overrides the config value
};

// Dispatch one of render | dimension | measure | check against a JSON config
// file.  Writes the command outputs plus run_report.json into out_dir and
// returns the process exit code: 0 success, 2 config/schema error,
// 3 numerical failure, 4 failed check on an example documented to pass.
int run_command(const std::string& command, const CliOptions& opts);

int run_family_c0(int d1, int d, double r);
int run_list_examples();

}  // namespace rsg
