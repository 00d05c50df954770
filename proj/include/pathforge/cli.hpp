#pragma once

#include <iosfwd>

namespace pathforge::cli {

/// Exit status: 0 success, 1 usage or configuration error, 2 data error or
/// failed validation.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace pathforge::cli
