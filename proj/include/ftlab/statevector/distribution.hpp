#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ftlab::statevector {

/// Probability distribution over width-bit outcomes. probs[code] is the
/// probability of outcome `code`, where bit i of code is the i-th measured
/// qubit. Bitstrings are written with character i = bit i.
struct Distribution {
  int width = 0;
  std::vector<double> probs;

  Distribution() = default;
  /// All-zero distribution of the given width (not normalised).
  explicit Distribution(int width);

  double total() const;
  double operator[](unsigned code) const { return probs[code]; }
  std::size_t size() const { return probs.size(); }

  bool operator==(const Distribution&) const = default;
};

std::string to_bitstring(unsigned code, int width);
/// Throws ParseError for characters other than '0'/'1'.
unsigned from_bitstring(std::string_view bits);

/// Largest absolute difference between two distributions of equal width.
double max_abs_difference(const Distribution& a, const Distribution& b);

}  // namespace ftlab::statevector
