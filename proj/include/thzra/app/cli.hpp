#pragma once

#include <iosfwd>

namespace thzra::app {

/// Exit codes: 0 success, 1 validation or runtime failure, 2 configuration error.
int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace thzra::app
