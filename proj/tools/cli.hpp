#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mlsvm::cli {

enum ExitCode : int {
    ok = 0,
    io_failure = 2,       // unreadable/unwritable file or malformed input
    invalid_input = 3,    // dimension mismatch, bad option or setting
    not_converged = 4,    // a solver hit its iteration limit
};

/// Runs one command line (without the program name). Data goes to `out`, diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mlsvm::cli
