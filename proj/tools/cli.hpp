#pragma once

// Command-line surface. Exit status: 0 success (or the verifier's expected
// verdict), 1 domain violation (or a contradicting verdict), 2 usage,
// I/O or parse error. A command that exits non-zero leaves the store as it
// found it.

#include <ostream>
#include <string>
#include <vector>

namespace nsub::cli {

inline constexpr int kOk = 0;
inline constexpr int kViolation = 1;
inline constexpr int kEnvironment = 2;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nsub::cli
