#pragma once

#include <span>

namespace ftlab::numerics {

/// Parameters of values ~ amplitude * exp(-t / decay_time) * cos(angular_frequency * t + phase) + offset.
struct FitResult {
  double amplitude = 0.0;
  double decay_time = 0.0;  ///< ns; +inf when the fit finds no decay
  double angular_frequency = 0.0;  ///< rad/ns
  double phase = 0.0;  ///< rad
  double offset = 0.0;
  double residual = 0.0;  ///< root-mean-square deviation of the fit
};

inline constexpr int kFrequencyScanCandidates = 64;

/// Least-squares damped-cosine fit by Nelder-Mead.
///
/// Initialisation: offset from the mean, amplitude from half the range, the
/// angular frequency from the largest discrete-spectrum magnitude over 64
/// candidates in [0, Nyquist] (then refined on a 64-point grid around the
/// peak), the phase from the spectral phase at that frequency, and the decay
/// time from the best of a few multiples of the sampling window. Requires at
/// least 8 samples with strictly increasing times; throws FitError for
/// constant data.
FitResult fit_damped_cosine(std::span<const double> times, std::span<const double> values);

double damped_cosine(const FitResult& p, double t);

}  // namespace ftlab::numerics
