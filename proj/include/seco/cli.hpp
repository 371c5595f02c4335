// Command-line front end shared by the seco tool and its tests.

#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace seco::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

/// `args` excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace seco::cli
