#ifndef EVTMS_CLI_HPP
#define EVTMS_CLI_HPP

#include <ostream>
#include <string>
#include <vector>

namespace evtms {

/// Runs the command-line front end.  `args` excludes the program name.
/// Exit codes: 0 success, 1 user/problem error, 2 I/O error.
/// Identical inputs and flags produce byte-identical output.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace evtms

#endif
