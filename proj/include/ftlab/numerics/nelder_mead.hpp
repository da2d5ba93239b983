#pragma once

#include <functional>
#include <span>
#include <vector>

namespace ftlab::numerics {

struct NelderMeadOptions {
  int max_iters = 2000;
  /// Absolute offset along each axis used to build the initial simplex.
  double simplex_init_scale = 0.1;
  /// Per-coordinate offsets; overrides simplex_init_scale when non-empty.
  std::vector<double> initial_steps;
  double tol_f = 1e-12;
  double tol_x = 1e-10;
  /// Called after every iteration with the current best value.
  std::function<void(int iteration, double f_best)> on_iteration;
};

struct NelderMeadResult {
  std::vector<double> x_best;
  double f_best = 0.0;
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Downhill simplex minimisation with reflection 1, expansion 2,
/// contraction 0.5 and shrink 0.5.
///
/// Stops once the spread of function values over the simplex is below tol_f
/// and the simplex diameter (max-norm) is below tol_x, or after max_iters
/// iterations. Either test alone can stop on a symmetric simplex straddling
/// the minimum, so both must hold; pass +inf to disable one of them. A non-finite objective at x0 throws NumericError;
/// non-finite values elsewhere are treated as +infinity. The returned value
/// never exceeds f(x0).
NelderMeadResult nelder_mead(const Objective& objective, std::vector<double> x0,
                             const NelderMeadOptions& options = {});

}  // namespace ftlab::numerics
