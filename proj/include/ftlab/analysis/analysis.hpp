#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ftlab/circuits/circuit.hpp"
#include "ftlab/statevector/distribution.hpp"

namespace ftlab::analysis {

using statevector::Distribution;

/// How kept 5-bit strings map to logical bits (b1, b2).
enum class DecodeMap {
  Xor,  ///< b1 = q1 xor q2, b2 = q1 xor q3 (consistent with the codewords)
  LiteralQ3Q4,  ///< b1 = q3, b2 = q4
};

struct PostselectionResult {
  Distribution logical_dist;  ///< width 2, renormalised
  double ratio = 0.0;  ///< kept probability mass
};

/// Discards outcomes with q0 = 1 or odd parity of q1q2q3q4 and decodes the
/// rest. Throws EmptyPostselectionError when nothing survives.
PostselectionResult postselect_decode(const Distribution& d, DecodeMap map = DecodeMap::Xor);

/// Half the l1 distance. Throws DomainError on width mismatch.
double statistical_distance(const Distribution& p, const Distribution& q);

/// Independent symmetric bit flips with probability p_flip on every bit.
/// Throws DomainError unless 0 <= p_flip <= 0.5.
Distribution apply_readout_error(const Distribution& d, double p_flip);

struct FtRecord {
  int circuit_id = 0;
  double d_bare = 0.0;
  double d_enc = 0.0;
  double ratio = 0.0;
  std::string backend;
  std::string config_digest;
};

/// Compares bare (width 2) and encoded (width 5) outcomes of one circuit with
/// its theory distribution, after optional readout error on both.
FtRecord evaluate_circuit(const circuits::LogicalCircuit& c, const Distribution& bare, const Distribution& encoded,
                          std::optional<double> p_flip = std::nullopt, DecodeMap map = DecodeMap::Xor);

struct FtReport {
  std::vector<FtRecord> records;
  double percentage_p = 0.0;  ///< share of records with d_enc < d_bare, in percent
  bool criterion_pass = false;  ///< d_enc < d_bare for every record
};

/// Throws DomainError for an empty record list.
FtReport build_report(std::vector<FtRecord> records);

struct ImportedCounts {
  int id = 0;
  Distribution dist;
  long long shots = 0;
  std::vector<double> sigma;  ///< binomial standard error per outcome
  std::string meta;  ///< serialised "meta" object, "{}" when absent
};

/// One counts document: {"id": int, "width": int, "counts": {bits: int}, "meta": {...}}.
/// Throws ParseError for malformed input, DomainError for negative or zero counts.
ImportedCounts parse_counts(std::string_view json_line);

/// All documents of a JSON-lines counts file (blank lines skipped).
std::vector<ImportedCounts> import_counts(const std::filesystem::path& path);

}  // namespace ftlab::analysis
