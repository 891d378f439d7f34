#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace cdde {

inline constexpr const char* kToolVersion = "0.1.0";

/// Exit codes: 0 success, 1 an analysis verdict FAILed, 2 usage or configuration error.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_command(int argc, const char* const* argv);

}  // namespace cdde
