#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace condlp {

// Exit codes: 0 ok, 1 invalid input or configuration, 2 solver nonconvergence.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace condlp
