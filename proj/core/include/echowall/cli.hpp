#pragma once

#include <iosfwd>

namespace echowall {

/// Command-line driver: subcommands simulate | detect | evaluate |
/// stack-make | stack-check | montecarlo | scenario.
/// Exit codes: 0 success, 2 bad input, 3 unsupported configuration.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

int run_cli(int argc, const char* const* argv);

}  // namespace echowall
