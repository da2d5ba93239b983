#include "ftlab/numerics/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ftlab/error.hpp"

namespace ftlab::numerics {
namespace {

constexpr double kRescaleAbove = 1e120;
constexpr double kRescaleFactor = 1e-120;

void check_args(int k_max, double x) {
  if (k_max < 0) throw DomainError("bessel: k_max must be non-negative");
  if (!std::isfinite(x)) throw DomainError("bessel: argument must be finite");
  if (x < 0.0) throw DomainError("bessel: argument must be non-negative, got " + std::to_string(x));
}

// Start index for the downward recurrence; high enough that the neglected
// J_{start+1} contributes below double precision.
int miller_start(int k_max, double x) {
  const double top = std::max(static_cast<double>(k_max), std::ceil(x));
  int start = static_cast<int>(top + 20.0 + std::sqrt(160.0 * (top + 1.0)) + 3.0 * std::cbrt(top + 1.0));
  if (start % 2 != 0) ++start;
  return start;
}

}  // namespace

std::vector<double> bessel_j_sequence(int k_max, double x) {
  check_args(k_max, x);
  std::vector<double> out(static_cast<std::size_t>(k_max) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }

  const int start = miller_start(k_max, x);
  const double two_over_x = 2.0 / x;
  double j_next = 0.0;  // J_{k+1}
  double j_cur = 1.0;  // J_k, arbitrary seed
  double even_sum = 0.0;  // sum over even k >= 2 of J_k
  double square_sum = 0.0;  // sum over k >= 1 of J_k^2

  for (int k = start; k >= 1; --k) {
    if (k <= k_max) out[static_cast<std::size_t>(k)] = j_cur;
    if (k % 2 == 0) even_sum += j_cur;
    square_sum += j_cur * j_cur;
    const double j_prev = k * two_over_x * j_cur - j_next;
    j_next = j_cur;
    j_cur = j_prev;
    if (std::abs(j_cur) > kRescaleAbove) {
      j_cur *= kRescaleFactor;
      j_next *= kRescaleFactor;
      even_sum *= kRescaleFactor;
      square_sum *= kRescaleFactor * kRescaleFactor;
      for (int i = k; i <= k_max; ++i) out[static_cast<std::size_t>(i)] *= kRescaleFactor;
    }
  }
  const double j0 = j_cur;
  out[0] = j0;

  const double norm = std::sqrt(j0 * j0 + 2.0 * square_sum);
  const double sign = (j0 + 2.0 * even_sum) >= 0.0 ? 1.0 : -1.0;
  const double scale = sign / norm;
  for (double& v : out) v *= scale;
  return out;
}

std::vector<double> bessel_i_scaled_sequence(int k_max, double x) {
  check_args(k_max, x);
  std::vector<double> out(static_cast<std::size_t>(k_max) + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }

  const int start = miller_start(k_max, x);
  const double two_over_x = 2.0 / x;
  double i_next = 0.0;
  double i_cur = 1.0;
  double sum = 0.0;  // sum over k >= 1 of I_k

  for (int k = start; k >= 1; --k) {
    if (k <= k_max) out[static_cast<std::size_t>(k)] = i_cur;
    sum += i_cur;
    const double i_prev = k * two_over_x * i_cur + i_next;
    i_next = i_cur;
    i_cur = i_prev;
    if (i_cur > kRescaleAbove) {
      i_cur *= kRescaleFactor;
      i_next *= kRescaleFactor;
      sum *= kRescaleFactor;
      for (int i = k; i <= k_max; ++i) out[static_cast<std::size_t>(i)] *= kRescaleFactor;
    }
  }
  out[0] = i_cur;
  const double scale = 1.0 / (i_cur + 2.0 * sum);
  for (double& v : out) v *= scale;
  return out;
}

}  // namespace ftlab::numerics
