#include "ftlab/numerics/chebyshev.hpp"

#include <cmath>
#include <complex>
#include <vector>

#include "ftlab/error.hpp"
#include "ftlab/numerics/bessel.hpp"

namespace ftlab::numerics {
namespace {

using cd = std::complex<double>;

constexpr int kConsecutiveSmall = 5;
constexpr double kMaxSliceArgument = 4.0;

void check_bounds(const HermitianAction& h, const StateVector& state) {
  if (!(h.bound_hi > h.bound_lo)) throw ConfigError("HermitianAction: spectral bounds have zero width");
  if (!h.apply) throw ConfigError("HermitianAction: missing apply");
  if (state.size() != h.dim) throw ConfigError("HermitianAction: state dimension does not match operator");
}

// Index of the first k >= k_min starting a run of kConsecutiveSmall values
// below threshold, or -1 if the sequence is too short.
int find_cutoff(const std::vector<double>& c, double k_min, double threshold) {
  int run = 0;
  const int first = static_cast<int>(std::ceil(k_min));
  for (int k = first; k < static_cast<int>(c.size()); ++k) {
    if (std::abs(c[static_cast<std::size_t>(k)]) < threshold) {
      if (++run == kConsecutiveSmall) return k - kConsecutiveSmall + 1;
    } else {
      run = 0;
    }
  }
  return -1;
}

// Rescaled operator x = (2H - (hi + lo)) / (hi - lo), spectrum inside [-1, 1].
struct Rescaled {
  const HermitianAction& h;
  double scale;
  double shift;

  explicit Rescaled(const HermitianAction& op)
      : h(op),
        scale(2.0 / (op.bound_hi - op.bound_lo)),
        shift((op.bound_hi + op.bound_lo) / (op.bound_hi - op.bound_lo)) {}

  // next = 2 x cur - prev (or x cur when prev is null).
  void step(const StateVector& cur, const StateVector* prev, StateVector& scratch, StateVector& next) const {
    h.apply(cur, scratch);
    if (prev == nullptr) {
      next = scale * scratch - shift * cur;
    } else {
      next = 2.0 * (scale * scratch - shift * cur) - *prev;
    }
  }
};

// sum_k coeff[k] T_k(x) |v>
StateVector chebyshev_series(const StateVector& v, const Rescaled& op, const std::vector<cd>& coeff) {
  StateVector result = coeff[0] * v;
  if (coeff.size() == 1) return result;
  StateVector prev = v;
  StateVector cur(v.size());
  StateVector scratch(v.size());
  StateVector next(v.size());
  op.step(prev, nullptr, scratch, cur);
  result += coeff[1] * cur;
  for (std::size_t k = 2; k < coeff.size(); ++k) {
    op.step(cur, &prev, scratch, next);
    result += coeff[k] * next;
    std::swap(prev, cur);
    std::swap(cur, next);
  }
  return result;
}

}  // namespace

std::size_t chebyshev_term_count(double z, double tol) {
  if (!std::isfinite(z)) throw DomainError("chebyshev: non-finite argument");
  if (!(tol > 0.0)) throw DomainError("chebyshev: tolerance must be positive");
  const double az = std::abs(z);
  int k_max = static_cast<int>(az + 20.0 * std::cbrt(az + 1.0) + 40.0);
  for (;;) {
    const auto j = bessel_j_sequence(k_max, az);
    const int cut = find_cutoff(j, az, tol / 10.0);
    if (cut >= 0) return static_cast<std::size_t>(cut) + 1;
    k_max *= 2;
  }
}

StateVector chebyshev_propagate(const StateVector& state, const HermitianAction& h, double t, double tol) {
  check_bounds(h, state);
  if (!std::isfinite(t)) throw DomainError("chebyshev_propagate: non-finite time");
  if (!(tol > 0.0 && tol <= 1e-6)) throw DomainError("chebyshev_propagate: tol must lie in (0, 1e-6]");
  if (t == 0.0) return state;

  const double half_width = 0.5 * (h.bound_hi - h.bound_lo);
  const double centre = 0.5 * (h.bound_hi + h.bound_lo);
  const double z = t * half_width;
  const double az = std::abs(z);
  const std::size_t terms = chebyshev_term_count(z, tol);
  const auto j = bessel_j_sequence(static_cast<int>(terms) - 1, az);

  // exp(-i z x) = J_0(z) + 2 sum_k (-i)^k J_k(z) T_k(x); for z < 0 use J_k(-z) = (-1)^k J_k(z).
  const cd unit = z >= 0.0 ? cd(0.0, -1.0) : cd(0.0, 1.0);
  std::vector<cd> coeff(terms);
  cd power(1.0, 0.0);
  for (std::size_t k = 0; k < terms; ++k) {
    coeff[k] = (k == 0 ? 1.0 : 2.0) * power * j[k];
    power *= unit;
  }
  const cd phase = std::exp(cd(0.0, -t * centre));
  return phase * chebyshev_series(state, Rescaled(h), coeff);
}

StateVector imaginary_time_apply(const StateVector& state, const HermitianAction& h, double beta_half, double tol) {
  check_bounds(h, state);
  if (!std::isfinite(beta_half) || beta_half < 0.0) {
    throw DomainError("imaginary_time_apply: beta_half must be finite and non-negative");
  }
  const double input_norm = state.norm();
  if (!(input_norm > 0.0)) throw DegenerateStateError("imaginary_time_apply: zero input state");
  if (beta_half == 0.0) return state / input_norm;

  const double half_width = 0.5 * (h.bound_hi - h.bound_lo);
  const double w_total = beta_half * half_width;
  const int slices = std::max(1, static_cast<int>(std::ceil(w_total / kMaxSliceArgument)));
  const double w = w_total / slices;

  // e^{-w x} = I_0(w) + 2 sum_k (-1)^k I_k(w) T_k(x); the common factor e^{-w}
  // and the e^{-beta_half * centre} shift drop out after normalisation.
  const double threshold = tol * std::exp(-2.0 * w) / 10.0;
  int k_max = static_cast<int>(w + 10.0 * std::sqrt(w + 1.0) + 30.0);
  std::vector<double> ik;
  int cut = -1;
  while (cut < 0) {
    ik = bessel_i_scaled_sequence(k_max, w);
    cut = find_cutoff(ik, 0.0, threshold);
    k_max *= 2;
  }
  std::vector<cd> coeff(static_cast<std::size_t>(cut) + 1);
  for (std::size_t k = 0; k < coeff.size(); ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    coeff[k] = (k == 0 ? 1.0 : 2.0) * sign * ik[k];
  }

  const Rescaled op(h);
  StateVector v = state / input_norm;
  for (int s = 0; s < slices; ++s) {
    v = chebyshev_series(v, op, coeff);
    const double n = v.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
      throw DegenerateStateError("imaginary_time_apply: state underflowed to zero");
    }
    v /= n;
  }
  return v;
}

}  // namespace ftlab::numerics
