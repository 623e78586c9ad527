#ifndef CUB_CLI_HPP
#define CUB_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace cub {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitExhausted = 2;

/// Entry point of the `cub` tool; `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace cub

#endif  // CUB_CLI_HPP
