#pragma once

#include <string>
#include <vector>

namespace sbsn {

// Exit codes: 0 success, 1 usage or input error, 2 numerical failure.
int run_cli(int argc, char** argv);
int run_cli(const std::vector<std::string>& args);

}  // namespace sbsn
