#pragma once

// Command-line front end of the lattice-hasimoto binary.

#include <iosfwd>
#include <string>
#include <vector>

namespace lh::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failed = 1;
inline constexpr int usage = 2;
inline constexpr int numerical = 3;
}  // namespace exit_code

/// Version line, with the bracket-table digest.
std::string version();

/// Parses args (args[0] is the program name) and runs the subcommand.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace lh::cli
