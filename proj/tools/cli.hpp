#pragma once

namespace wtc::cli {

/// The wtc command-line tool. Exit codes: 0 success / equivalent / satisfied,
/// 1 inequivalent / unsatisfied / property violated, 2 usage or input error.
int run(int argc, const char* const* argv);

}  // namespace wtc::cli
