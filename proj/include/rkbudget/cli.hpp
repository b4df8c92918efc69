#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rkbudget {

inline constexpr const char* kSeedEnv = "RKBUDGET_SEED";

/// Runs the command line `args` (without the program name). Returns 0 on
/// success, 1 when a validation campaign fails, 2 on usage or config errors.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "a:b:step" (inclusive) or "x,y,z".
std::vector<long> parse_int_list(const std::string& spec);
std::vector<double> parse_real_list(const std::string& spec);

}  // namespace rkbudget
