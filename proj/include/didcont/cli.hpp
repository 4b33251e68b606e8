#pragma once

#include <iosfwd>

namespace didcont {

inline constexpr int exit_ok = 0;
inline constexpr int exit_input_error = 1;
inline constexpr int exit_estimation_error = 2;

//! Entry point of the didcont executable: subcommands `estimate` and
//! `simulate`. Returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace didcont
