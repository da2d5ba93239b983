#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>

namespace ftlab::transmon {

enum class PulseShape { Gaussian, FlatTop };

/// Charge-drive pulse
///   n_g(t) = Omega_G(t) cos(2 pi f t - gamma) + beta dOmega_G/dt cos(2 pi f t - gamma - pi/2).
/// Gaussian: Omega_G(t) = amplitude (g(t) - g(0)) / (1 - g(0)), g(t) = exp(-(t - T/2)^2 / 2 sigma^2),
/// so the envelope vanishes at both ends and peaks at the amplitude.
/// FlatTop: 15 ns Gaussian rise (sigma 5 ns, baseline-subtracted and rescaled
/// to reach the amplitude), flat for `flat` ns, mirrored fall; beta is ignored.
struct Pulse {
  PulseShape shape = PulseShape::Gaussian;
  double amplitude = 0.0;  // dimensionless
  double duration = 0.0;   // ns; FlatTop: 30 + flat
  double sigma = 0.0;      // ns
  double freq = 0.0;       // GHz
  double phase = 0.0;      // rad
  double drag = 0.0;       // ns
  double flat = 0.0;       // ns, FlatTop only

  static Pulse gaussian(double amplitude, double duration, double freq, double drag, double phase = 0.0);
  static Pulse flat_top(double amplitude, double flat, double freq, double phase = 0.0);

  /// Throws DomainError unless duration > 0 and sigma > 0.
  void validate() const;
};

inline constexpr double kFlatTopRise = 15.0;
inline constexpr double kFlatTopSigma = 5.0;

double pulse_envelope(const Pulse& p, double t);
double pulse_envelope_derivative(const Pulse& p, double t);

/// n_g at pulse-local time t in [0, duration] (DomainError otherwise). The
/// carrier is evaluated at t + carrier_offset so that pulses placed on a
/// common clock keep a consistent phase reference.
double pulse_waveform(const Pulse& p, double t, double carrier_offset = 0.0);

/// One row of the single-qubit pulse table.
struct XpihParams {
  std::string name;
  int qubit = 0;
  double f = 0.0;        // GHz
  double t_x = 80.0;     // ns
  double omega_x = 0.0;
  double beta_x = 0.0;   // ns
};

/// One row of the CNOT pulse table.
struct CnotParams {
  std::string name;
  int control = 0;
  int target = 0;
  double f_c = 0.0;
  double f_t = 0.0;
  double t_cr = 0.0;
  double t_x = 80.0;
  double omega_cr = 0.0;
  double omega_c = 0.0;
  double beta_c = 0.0;
  double omega_t = 0.0;
  double beta_t = 0.0;
};

/// The "plain" or "withf" gate set.
struct PulseLibrary {
  std::string set = "plain";
  std::map<int, XpihParams> xpih;
  std::map<std::pair<int, int>, CnotParams> cnot;
};

/// Loads rows of the chosen set ("plain": names without suffix, "withf":
/// names ending in "-withf") from the two table files.
PulseLibrary load_library(const std::filesystem::path& xpih_file, const std::filesystem::path& cnot_file,
                          const std::string& set);

Pulse xpih_pulse(const XpihParams& p, double phase = 0.0);

}  // namespace ftlab::transmon
