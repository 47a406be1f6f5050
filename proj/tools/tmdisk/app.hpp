#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tmdisk::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitDegeneracy = 3;

// Runs the tool on argv (argv[0] is the program name). Records go to `out`,
// error records and help text for failures to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tmdisk::cli
