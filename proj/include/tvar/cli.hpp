#pragma once

#include <string>
#include <vector>

namespace tvar::cli {

// Dispatches one invocation. Exit codes: 0 success, 1 configuration error
// (bad flags, unreadable or invalid config), 2 runtime/numeric error.
int run(const std::vector<std::string>& args);

}  // namespace tvar::cli
