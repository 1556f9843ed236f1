#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace liestab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitMalformed = 3;

/// Runs the command line tool; args exclude the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace liestab
