#pragma once

#include <iosfwd>

namespace qgreedy {

// Exit codes: 0 ok, 1 verify failure, 2 configuration error, 3 basis
// invariant failure.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace qgreedy
