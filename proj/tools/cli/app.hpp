#pragma once

#include <ostream>

namespace careertrace::cli {

/// Entry point of the careertrace executable. Exit codes: 0 success,
/// 1 data or validation failure, 2 usage error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace careertrace::cli
