#pragma once

#include <iosfwd>

namespace hardyrad::cli {

/// Exit statuses: 0 success, 1 runtime or input error, 2 a structural
/// hypothesis of the problem fails.
inline constexpr int kOk = 0;
inline constexpr int kFailure = 1;
inline constexpr int kHypothesis = 2;

/// Output directory: --out-dir, else $HARDYRAD_OUTPUT_DIR, else ".".
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace hardyrad::cli
