#pragma once

// Command-line front end: volume, net, cover, illuminate, fn-schedule, verify
// and bounds subcommands writing JSON, CSV and a digest manifest.

#include <iosfwd>
#include <string>

namespace homcover::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumeric = 3;
inline constexpr int kExitRefuted = 4;

/// Environment variable overriding the default worker count.
inline constexpr const char* kThreadsEnv = "HOMCOVER_THREADS";

/// Runs one subcommand and returns the process exit code.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace homcover::cli
