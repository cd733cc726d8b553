#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace ntnsim {

/// Exit codes. Usage covers bad flags and bad configuration; both are
/// reported before any simulation work.
enum Exit : int { Ok = 0, RunFailed = 1, Usage = 2 };

using EnvLookup = std::function<const char*(const char*)>;

/// Entry point behind main(). Reports and tables go to `out`, progress and
/// diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
            const EnvLookup& env = {});

/// "10000,20000" or an inclusive "start:stop:step" range, or a mix of both.
/// Throws std::invalid_argument on anything else or on a non-positive value.
std::vector<std::uint64_t> parse_count_list(const std::string& spec);

}  // namespace ntnsim
