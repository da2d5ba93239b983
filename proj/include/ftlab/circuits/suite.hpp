#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ftlab/circuits/circuit.hpp"

namespace ftlab::circuits {

inline constexpr int kSuiteSize = 465;
inline constexpr int kSuiteMaxLength = 10;  // T
inline constexpr int kSuiteRepetition = 6;  // RP
inline constexpr int kSuitePeriodicity = 3;  // P

/// SHA-256 of the normalised suite text (see suite_digest).
inline constexpr std::string_view kSuiteSha256 =
    "538fe905e89f6cf5ac5460d44a24b9fda63bb7783dd8dbf6f2c04ec75bbe12a7";

/// One line of the suite file: a range of three consecutive ids sharing a
/// gate sequence (application order).
struct SuiteEntry {
  int first_id = 0;
  int last_id = 0;
  std::vector<LogicalGate> gates;

  bool operator==(const SuiteEntry&) const = default;
};

/// Parses "171-173 CZ X1 ... Z2 |i>". Throws ParseError.
SuiteEntry parse_suite_entry(std::string_view line);

/// Canonical line text, e.g. "258-260 HHS CZ |i>".
std::string format_suite_entry(const SuiteEntry& e);

/// One circuit per id in the range, with init_for_id(id).
std::vector<LogicalCircuit> expand(const SuiteEntry& e);

/// SHA-256 (hex) over the suite's non-comment, non-blank lines, each trimmed,
/// internal whitespace collapsed to one space, joined with '\n'.
std::string suite_digest(std::string_view text);

/// Parses suite text without integrity checks; ids must be contiguous from 0.
std::vector<LogicalCircuit> parse_suite(std::string_view text);

/// Loads the shipped suite: verifies the digest against kSuiteSha256 and that
/// exactly 465 circuits with ids 0..464 are present. Throws
/// DataIntegrityError otherwise.
std::vector<LogicalCircuit> load_suite(const std::filesystem::path& path);

/// The 15 ids of the representative selection: 0-2, 240-242, 216-218,
/// 171-173, 270-272.
std::vector<int> selected15_ids();

std::string sha256_hex(std::string_view data);

}  // namespace ftlab::circuits
