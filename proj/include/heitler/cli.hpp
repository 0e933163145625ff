#pragma once

#include <iosfwd>

namespace heitler::cli {

/// Parses the command line and runs it. Exit codes: 0 success, 2 invalid
/// configuration, 3 numerical failure or non-convergence, 4 closed form
/// outside its domain.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace heitler::cli
