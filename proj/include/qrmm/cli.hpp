#pragma once

#include <string>
#include <vector>

namespace qrmm::cli {

/// Dispatches one toolkit invocation. Returns the process exit code; all
/// toolkit failures are reported as a single machine-parsable line
/// "qrmm: error [<category>] <message>" on stderr.
int run(const std::vector<std::string>& args);

}  // namespace qrmm::cli
