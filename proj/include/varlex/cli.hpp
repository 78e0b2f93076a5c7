#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace varlex::cli {

// Exit codes: 0 success or non-violated verdict, 1 violated, 2 preconditions
// not met or bad input.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace varlex::cli
