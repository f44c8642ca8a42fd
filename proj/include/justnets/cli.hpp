#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace justnets::cli {

// Exit codes besides 0 (pass / success) and 1 (fail verdict).
inline constexpr int kInconclusive = 2;
inline constexpr int kUsage = 64;
inline constexpr int kDataError = 65;  // input rejected by a precondition
inline constexpr int kFileError = 66;

/// Runs the justnets command line; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace justnets::cli
