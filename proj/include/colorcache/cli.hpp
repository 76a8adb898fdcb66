#pragma once

#include <iosfwd>

namespace colorcache {

// Entry point for the colorcache tool. Exit codes: 0 success, 1 usage error,
// 2 simulation or input error.
int cli_main(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace colorcache
