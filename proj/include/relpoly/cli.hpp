#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace relpoly::cli {

//! Environment variable naming the default config file.
inline constexpr const char* config_env = "RELPOLY_CONFIG";

//! Runs one command line (without the program name). Returns the exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace relpoly::cli
