#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qsg {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitResource = 2, kExitInvariant = 3 };

/// Runs one command (args exclude the program name). The report goes to
/// `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a, used for the input digest of reports.
std::uint64_t fnv1a(std::string_view data, std::uint64_t h = 14695981039346656037ull);

}  // namespace qsg
