#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ftlab/analysis/analysis.hpp"

namespace ftlab::cli {

/// Exit statuses.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumeric = 3;

/// Entry point of the `ftlab` tool. `args` excludes the program name.
/// Results go to `out` (one "<kind> <id> <path>" line per stored entry plus
/// command-specific lines), diagnostics to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Circuit ids of a selection: "all", "selected15", or a comma list of ids
/// and inclusive ranges ("0-2,171"). Sorted and unique. Throws
/// ValidationError for unknown ids or malformed text.
std::vector<int> parse_selection(std::string_view spec);

/// Directory holding suite.txt and the device and pulse tables:
/// $FTLAB_DATA_DIR, else the source tree's data directory.
std::filesystem::path data_dir();

/// Plot of D_bare and D_enc (lines) and the postselection ratio (dots)
/// against circuit id.
std::string render_svg(const analysis::FtReport& report);

}  // namespace ftlab::cli
