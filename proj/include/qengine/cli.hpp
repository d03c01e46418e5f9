#pragma once

#include <iosfwd>

namespace qengine {

// Exit codes: 0 ok, 1 validation/runtime failure, 2 usage or parameter error,
// 3 not an engine.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace qengine
