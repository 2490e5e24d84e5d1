#pragma once

#include <string>
#include <vector>

namespace sepsis::harness {

// Entry point shared by the executable and the tests. args[0] is the
// program name. Returns the process exit status.
int run_cli(const std::vector<std::string>& args);

// --out, then SEPSIS_OUT_DIR, then paths.output_dir from the config.
inline constexpr const char* kOutDirEnv = "SEPSIS_OUT_DIR";

}  // namespace sepsis::harness
