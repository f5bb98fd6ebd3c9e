#ifndef MCGIP_CLI_H
#define MCGIP_CLI_H

#include <iostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mcgip::cli {

/// Command-line misuse distinct from malformed data (exit 1 vs 2).
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dispatches one subcommand (fixations, heatmap, sim, affinity, pairs,
/// synth, train, probe). args excludes the program name. Returns the
/// process exit status: 0 success, 1 usage error, 2 data error.
int run_command(const std::vector<std::string>& args, std::ostream& out = std::cout,
                std::ostream& err = std::cerr);

} // namespace mcgip::cli

#endif
