#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace opfact {

inline constexpr int exit_ok = 0;
inline constexpr int exit_config_error = 1;
inline constexpr int exit_io_error = 2;

// args excludes the program name. Subcommands: cover, bound, factorize-check, train, evaluate, report.
int cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace opfact
