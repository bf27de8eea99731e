#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sci::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kIo = 2, kNumeric = 3 };

/// Entry point of `scirecon`. Subcommands: simulate, reconstruct, bench,
/// denoise. Every subcommand accepts `--config FILE` holding key=value lines
/// named after its flags; flags given on the command line take precedence.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace sci::cli
