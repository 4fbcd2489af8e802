#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hlds::cli {

/// Exit codes: 0 success, 1 any error, 2 invalid synthesis script (including
/// aliasing).
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitBadScript = 2;

/// args[0] is the program name. Machine output goes to `out`, diagnostics to
/// `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int main(int argc, char** argv);

} // namespace hlds::cli
