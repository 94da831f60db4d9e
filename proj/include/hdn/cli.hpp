#pragma once

#include <iosfwd>
#include <string_view>

namespace hdn {

inline constexpr std::string_view kVersion = "0.1.0";

/// Entry point of the `hdn` command-line tool. Subcommands: verify, classify,
/// scan, trajectory, measure, sample-pairs, replay.
///
/// Exit status: 0 when the computation completed (ill-defined verdicts are
/// results), 1 on verification mismatch or when the computation could not be
/// carried out, 2 on usage or configuration errors.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace hdn
