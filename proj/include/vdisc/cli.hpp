#pragma once

#include <iosfwd>

namespace vdisc {

enum ExitCode : int {
    kExitOk = 0,
    kExitIo = 1,
    kExitConfig = 2,
    kExitSolver = 3,
    kExitCertification = 4,
};

/// Entry point of the `vdisc` command line; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace vdisc
