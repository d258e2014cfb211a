#pragma once

#include <iosfwd>

namespace fracmt::cli {

// Runs one `fracmt` command. Exit codes: 0 success, 1 failed validation or
// computation, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv);

}  // namespace fracmt::cli
