#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace fecp::cli {

// Exit codes besides 0 (success) and CLI11's own usage-error codes.
inline constexpr int kDomainError = 2;
inline constexpr int kSingularParameters = 3;
inline constexpr int kIoError = 4;

// Entry point of the `fecp` tool. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fecp::cli
