#pragma once

#include <vector>

namespace ftlab::numerics {

/// Bessel functions of the first kind J_0(x) ... J_{k_max}(x) for x >= 0.
///
/// Uses Miller's downward recurrence started well above max(k_max, x) and
/// normalised with J_0^2 + 2 sum_k J_k^2 = 1 (sign fixed by
/// J_0 + 2 sum_k J_{2k} = 1). Absolute accuracy is close to 1e-15.
std::vector<double> bessel_j_sequence(int k_max, double x);

/// Exponentially scaled modified Bessel functions e^{-x} I_k(x) for
/// k = 0 ... k_max, x >= 0. Normalised with e^{-x}(I_0 + 2 sum_k I_k) = 1.
std::vector<double> bessel_i_scaled_sequence(int k_max, double x);

}  // namespace ftlab::numerics
