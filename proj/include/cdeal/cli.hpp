#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cdeal::cli {

/// Exit codes of the command-line front end.
enum ExitCode : int {
    ok = 0,
    usage_error = 2,
    data_error = 3,
    nsao_violated = 4,
    conditioning_error = 5,
};

/// Runs one command. `args` excludes the program name. Results go to `out`,
/// a one-line JSON error object to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Worker threads allowed by COHERENT_DEAL_THREADS (default: hardware threads).
int thread_budget();

}  // namespace cdeal::cli
