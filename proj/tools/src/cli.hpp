#pragma once

// Command-line front end. Subcommands:
//   identity   pointwise boundary identities over a boundary sampling
//   flux       flux formulas for the entry's Killing / conformal fields
//   sweep      |H_r| against its estimate while one descriptor parameter varies
//   estimate   |H_r| estimate for a single configuration
//   volume     volume bound for minimal configurations bounded by a sphere
//   transverse transversality verdict along the boundary
//   families   list catalog families
//
// Exit codes: 0 all checks pass, 1 numeric tolerance or precondition failure,
// 2 configuration or usage error.

#include <ostream>
#include <string>
#include <vector>

namespace newtonflux::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace newtonflux::cli
