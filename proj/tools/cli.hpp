#pragma once

#include <iosfwd>

namespace dpocl {

/// Entry point of the `dpocl` tool. Exit codes: 0 solution / clean, 1
/// exhausted / unsound, 2 budget exceeded, 3 input error.
int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dpocl
