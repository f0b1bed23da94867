// cli.hpp: command-line driver for the tpdicke toolkit
//
// Subcommands: spectrum, peres, ratio, spacing, poincare, integrable-check.
// Settings come from flags or a flat key=value file (--config); keys are the
// flag names without dashes, flags given on the command line win, and an
// unknown key is an error. Exit codes: 0 ok, 2 configuration, 3 numerical,
// 4 domain.

#pragma once

#include <iosfwd>

namespace tpdicke::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitDomain = 4;

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace tpdicke::cli
