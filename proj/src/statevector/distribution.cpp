#include "ftlab/statevector/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ftlab/error.hpp"

namespace ftlab::statevector {

Distribution::Distribution(int w) : width(w) {
  if (w < 0 || w > 30) throw DomainError("distribution width out of range");
  probs.assign(std::size_t{1} << w, 0.0);
}

double Distribution::total() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }

std::string to_bitstring(unsigned code, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if ((code >> i) & 1U) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

unsigned from_bitstring(std::string_view bits) {
  if (bits.empty() || bits.size() > 30) throw ParseError("bitstring length out of range", 0);
  unsigned code = 0;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] == '1') {
      code |= 1U << i;
    } else if (bits[i] != '0') {
      throw ParseError("invalid bitstring character", i);
    }
  }
  return code;
}

double max_abs_difference(const Distribution& a, const Distribution& b) {
  if (a.width != b.width) throw DomainError("distribution widths differ");
  double m = 0.0;
  for (std::size_t k = 0; k < a.probs.size(); ++k) m = std::max(m, std::abs(a.probs[k] - b.probs[k]));
  return m;
}

}  // namespace ftlab::statevector
