#include "ftlab/numerics/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <vector>

#include "ftlab/error.hpp"
#include "ftlab/numerics/nelder_mead.hpp"

namespace ftlab::numerics {
namespace {

constexpr std::size_t kMinSamples = 8;
constexpr int kRestarts = 3;

double wrap_phase(double phi) {
  phi = std::remainder(phi, 2.0 * std::numbers::pi);
  return phi;
}

// |sum_j (v_j - mean) e^{-i w t_j}|, the discrete-spectrum magnitude at w.
std::complex<double> spectrum(std::span<const double> t, std::span<const double> v, double mean, double w) {
  std::complex<double> acc{0.0, 0.0};
  for (std::size_t j = 0; j < t.size(); ++j) acc += (v[j] - mean) * std::polar(1.0, -w * t[j]);
  return acc;
}

double scan_peak(std::span<const double> t, std::span<const double> v, double mean, double lo, double hi) {
  double best_w = lo;
  double best_mag = -1.0;
  for (int j = 0; j < kFrequencyScanCandidates; ++j) {
    const double w = lo + (hi - lo) * j / (kFrequencyScanCandidates - 1);
    const double mag = std::abs(spectrum(t, v, mean, w));
    if (mag > best_mag) {
      best_mag = mag;
      best_w = w;
    }
  }
  return best_w;
}

}  // namespace

double damped_cosine(const FitResult& p, double t) {
  const double envelope = std::isinf(p.decay_time) ? 1.0 : std::exp(-t / p.decay_time);
  return p.amplitude * envelope * std::cos(p.angular_frequency * t + p.phase) + p.offset;
}

FitResult fit_damped_cosine(std::span<const double> times, std::span<const double> values) {
  if (times.size() != values.size()) throw FitError("fit_damped_cosine: times and values differ in length");
  if (times.size() < kMinSamples) throw FitError("fit_damped_cosine: at least 8 samples required");
  for (std::size_t j = 1; j < times.size(); ++j) {
    if (!(times[j] > times[j - 1])) throw FitError("fit_damped_cosine: times must be strictly increasing");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw FitError("fit_damped_cosine: non-finite sample");
  }

  const auto n = values.size();
  const double t0 = times.front();
  std::vector<double> ts(n);
  for (std::size_t j = 0; j < n; ++j) ts[j] = times[j] - t0;
  const double window = ts.back();

  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  const auto [vmin, vmax] = std::minmax_element(values.begin(), values.end());
  double variance = 0.0;
  for (double v : values) variance += (v - mean) * (v - mean);
  variance /= static_cast<double>(n);
  if (*vmax - *vmin <= 1e-14 * std::max(1.0, std::abs(mean)) || variance == 0.0) {
    throw FitError("fit_damped_cosine: data has zero variance");
  }

  std::vector<double> dts(n - 1);
  for (std::size_t j = 1; j < n; ++j) dts[j - 1] = ts[j] - ts[j - 1];
  std::nth_element(dts.begin(), dts.begin() + static_cast<std::ptrdiff_t>(dts.size() / 2), dts.end());
  const double nyquist = std::numbers::pi / dts[dts.size() / 2];

  const double coarse = scan_peak(ts, values, mean, 0.0, nyquist);
  const double grid = nyquist / (kFrequencyScanCandidates - 1);
  const double w0 = scan_peak(ts, values, mean, std::max(0.0, coarse - grid), coarse + grid);
  const double phi0 = std::arg(spectrum(ts, values, mean, w0));
  const double a0 = 0.5 * (*vmax - *vmin) * (w0 == 0.0 ? (values.front() >= mean ? 1.0 : -1.0) : 1.0);

  // Parameters: amplitude, decay rate (|rate| used), angular frequency, phase, offset.
  auto objective = [&](std::span<const double> p) {
    const double rate = std::abs(p[1]);
    double ss = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double model = p[0] * std::exp(-rate * ts[j]) * std::cos(p[2] * ts[j] + p[3]) + p[4];
      const double r = model - values[j];
      ss += r * r;
    }
    return ss / static_cast<double>(n);
  };

  std::vector<double> best;
  double best_f = std::numeric_limits<double>::infinity();
  for (double multiple : {0.1, 0.3, 1.0, 3.0}) {
    std::vector<double> p{a0, multiple / window, w0, w0 == 0.0 ? 0.0 : phi0, mean};
    const double f = objective(p);
    if (f < best_f) {
      best_f = f;
      best = p;
    }
  }

  NelderMeadOptions opts;
  opts.max_iters = 4000;
  opts.tol_f = 1e-16 * variance;
  opts.tol_x = 1e-13;
  for (int restart = 0; restart < kRestarts; ++restart) {
    const double rate_step = std::max(0.5 * std::abs(best[1]), 0.1 / window);
    opts.initial_steps = {0.1 * std::max(std::abs(best[0]), 1e-3 * (*vmax - *vmin)), rate_step,
                          0.5 * grid, 0.3, 0.05 * (*vmax - *vmin)};
    const auto r = nelder_mead(objective, best, opts);
    best = r.x_best;
    best_f = r.f_best;
  }

  FitResult out;
  const double rate = std::abs(best[1]);
  out.decay_time = rate > 0.0 ? 1.0 / rate : std::numeric_limits<double>::infinity();
  out.amplitude = best[0] * std::exp(rate * t0);
  out.angular_frequency = best[2];
  out.phase = best[3] - best[2] * t0;
  out.offset = best[4];
  if (out.angular_frequency < 0.0) {
    out.angular_frequency = -out.angular_frequency;
    out.phase = -out.phase;
  }
  if (out.amplitude < 0.0) {
    out.amplitude = -out.amplitude;
    out.phase += std::numbers::pi;
  }
  out.phase = wrap_phase(out.phase);
  out.residual = std::sqrt(best_f);
  return out;
}

}  // namespace ftlab::numerics
