#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace prt::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// Runs one `prtlab` invocation; args excludes the program name.
/// Returns 0 on success or pass, 1 on test failure or coverage below threshold,
/// 2 on usage or configuration errors.
int run(std::vector<std::string> args, std::ostream& out, std::ostream& err);

}  // namespace prt::cli
