#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace gll::cli {

// Runs one command line (without the program name).  Results go to `out`,
// diagnostics and timings to `err`; stdin input is read from `in`.
// Returns 0 on accept, 1 on reject, 2 on any operational error.
int run(std::span<const std::string> args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace gll::cli
