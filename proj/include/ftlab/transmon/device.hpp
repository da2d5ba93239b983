#pragma once

#include <Eigen/Dense>
#include <array>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ftlab::transmon {

inline constexpr int kTransmons = 5;
inline constexpr int kResonators = 6;
inline constexpr int kLevels = 4;  // per transmon and per resonator
inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Device parameters as listed in the device tables, in GHz (ordinary
/// frequency). Accessors with an `_rad` suffix return rad/ns.
struct TransmonDevice {
  std::array<double, kTransmons> e_c{};         // E_C/2pi
  std::array<double, kTransmons> e_j{};         // E_J/2pi
  std::array<double, kTransmons> qubit_freq{};  // omega/2pi
  std::array<double, kTransmons> drive_freq{};  // omega^dr/2pi
  std::array<double, kResonators> omega{};      // Omega/2pi
  std::array<double, kResonators> g{};          // G/2pi
  std::array<std::pair<int, int>, kResonators> coupled{};

  double e_c_rad(int q) const { return kTwoPi * e_c[q]; }
  double e_j_rad(int q) const { return kTwoPi * e_j[q]; }

  /// Throws ConfigError on a transmon ratio E_J/E_C <= 20, non-positive
  /// energies or a topology other than r0:(q1,q2) r1:(q0,q1) r2:(q2,q3)
  /// r3:(q1,q4) r4:(q3,q4) r5:(q0,q4).
  void validate() const;
};

TransmonDevice device_from_json(const nlohmann::json& doc);
nlohmann::json device_to_json(const TransmonDevice& d);
TransmonDevice load_device(const std::filesystem::path& path);

/// Lowest n_levels eigenpairs of 4 E_C n^2 - E_J cos(phi) in a charge basis
/// n = -n_charge_max..n_charge_max. Energies are shifted so E_0 = 0; the
/// charge operator is returned in the eigenbasis with the sign convention
/// n(m-1, m) > 0.
struct TransmonLevels {
  Eigen::VectorXd energies;
  Eigen::MatrixXd n_matrix;
};

TransmonLevels transmon_eigensystem(double e_c, double e_j, int n_charge_max = 17, int n_levels = kLevels);

/// Which transmons and resonators of the device are simulated. Sites are
/// ordered transmons first (in the given order), then resonators; site s has
/// stride 4^s in the state vector.
struct Subsystem {
  std::vector<int> transmons;
  std::vector<int> resonators;

  /// Parses names like "q0r1", "reduced-q3q4r4" or "full".
  static Subsystem parse(std::string_view name);
  static Subsystem full();
  std::string name() const;
  int sites() const { return static_cast<int>(transmons.size() + resonators.size()); }
};

}  // namespace ftlab::transmon
