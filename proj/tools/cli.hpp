#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace subhol::cli {

enum Exit : int { ok = 0, verification_failure = 1, input_error = 2 };

/// Runs the command line (args excludes the program name). Reports go to
/// `out` unless --out is given; "-" as an input path reads `in`.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string fnv1a_hex(std::string_view text);

}  // namespace subhol::cli
