#pragma once

#include <iosfwd>

namespace driftgate {

/// Exit status: 0 ok, 2 bad configuration or usage, 3 data error,
/// 4 internal invariant breach, 1 anything else.
int run_command(int argc, char** argv);
int run_command(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace driftgate
