#ifndef TORSIONLAB_CLI_HPP
#define TORSIONLAB_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace torsionlab::cli {

// Dispatches one command line. Exit codes: 0 success (JSON on out),
// 1 domain error (structured error JSON on out), 2 usage error.
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

} // namespace torsionlab::cli

#endif
