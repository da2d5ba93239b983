#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <functional>

namespace ftlab::numerics {

using StateVector = Eigen::VectorXcd;

/// Matrix-free Hermitian operator with rigorous spectral bounds
/// (angular frequency, rad/ns).
struct HermitianAction {
  Eigen::Index dim = 0;
  double bound_lo = 0.0;
  double bound_hi = 0.0;
  /// out = H * in. `out` is resized by the caller; it never aliases `in`.
  std::function<void(const StateVector& in, StateVector& out)> apply;

  StateVector operator()(const StateVector& v) const {
    StateVector out(v.size());
    apply(v, out);
    return out;
  }
};

inline constexpr double kDefaultPropagationTol = 1e-12;

/// Number of Chebyshev terms kept for argument z at tolerance tol: the first
/// k >= |z| where |J_k(|z|)| < tol / 10 for five consecutive k, plus one.
std::size_t chebyshev_term_count(double z, double tol);

/// exp(-i t H)|state> by Chebyshev expansion with Bessel coefficients.
/// t may be negative. Throws ConfigError when bound_hi <= bound_lo.
StateVector chebyshev_propagate(const StateVector& state, const HermitianAction& h, double t,
                                double tol = kDefaultPropagationTol);

/// e^{-beta_half H}|state>, normalised. Long imaginary times are split into
/// slices so every slice keeps a relative truncation error below tol.
/// Throws DegenerateStateError if the result underflows to zero.
StateVector imaginary_time_apply(const StateVector& state, const HermitianAction& h, double beta_half,
                                 double tol = kDefaultPropagationTol);

}  // namespace ftlab::numerics
