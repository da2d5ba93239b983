#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ftlab/circuits/circuit.hpp"
#include "ftlab/numerics/chebyshev.hpp"
#include "ftlab/numerics/fit.hpp"
#include "ftlab/spinbath/pauli_sum.hpp"
#include "ftlab/statevector/distribution.hpp"

namespace ftlab::spinbath {

inline constexpr int kQubits = 5;
inline constexpr int kMinEnv = 5;
inline constexpr int kMaxEnv = 27;

enum class KDistribution {
  FixedMagnitude,  ///< |K| = k_magnitude with a random sign per (qubit, axis)
  UniformMagnitude,  ///< |K| uniform in [0.9, 1.1] * k_magnitude, random sign
};

/// Spin qubits q0..q4 (sites 0..4) coupled to a periodic ring of n_env
/// two-level defects (sites 5..n_env+4). Energies in rad/ns, times in ns.
struct SpinBathConfig {
  double lambda = 0.0;
  double beta = 1.0;  ///< inverse temperature, ns
  int n_env = 5;
  double j_scale = 2.0;  ///< J: ring couplings uniform in [-J, J]
  double k_magnitude = 2.0;
  KDistribution k_distribution = KDistribution::FixedMagnitude;
  std::uint64_t seed = 1;
  /// 0 selects the default: 10 for n_env < 10, else 1.
  int n_thermal_samples = 0;
  double tol = numerics::kDefaultPropagationTol;

  int thermal_samples() const { return n_thermal_samples > 0 ? n_thermal_samples : (n_env < 10 ? 10 : 1); }
  /// Throws ConfigError for out-of-range parameters.
  void validate() const;
};

/// Random couplings realised from the config seed.
struct Couplings {
  std::array<int, kQubits> defect_map{};  ///< qubit n -> environment site j_n
  std::vector<std::array<double, 3>> env;  ///< J^{x,y,z} of bond (5+b, 5+(b+1) mod n_env)
  std::array<std::array<double, 3>, kQubits> qubit_env{};  ///< K^{x,y,z}_{n j_n}
};

Couplings realize_couplings(const SpinBathConfig& cfg);

/// Piecewise-constant control parameters of the qubit Hamiltonian
/// -sum h^x s^x - sum h^z s^z - sum_{n<m} g_x s^x s^x.
struct GateSegment {
  std::array<double, kQubits> h_x{};
  std::array<double, kQubits> h_z{};
  std::array<std::array<double, kQubits>, kQubits> g_x{};  ///< symmetric; each pair counted once
  double duration = 0.0;
};

/// X(n): h_x = 1, t = pi/2. Z(n): h_z = 15 + n/2, t = pi/(30+n).
/// S(n): h_z = 15 + n/2, t = pi/(60+2n). H(n): h_x = h_z = 15 + n/2,
/// t = pi/sqrt(2)/(30+n). CNOT(n,m): H(n), I(n,m), H(n) with I(n,m):
/// h_x(n) = h_x(m) = -0.025, g_x = 0.025, t = 10 pi.
/// Each segment equals its gate up to a global phase; S realises diag(1, -i),
/// which acts like S on the code space (see lower_encoded).
std::vector<GateSegment> build_segment(const circuits::PhysicalOp& op);

/// Total simulated time of a physical circuit, ns.
double circuit_duration(const circuits::PhysicalCircuit& pc);

/// H_E on the environment alone (n_env sites, site 0 = ring site 5).
PauliSum environment_hamiltonian(const SpinBathConfig& cfg, const Couplings& c);

/// Full H = H_Q(seg) + H_E + lambda H_QE on 5 + n_env sites.
PauliSum total_hamiltonian(const SpinBathConfig& cfg, const Couplings& c, const GateSegment& seg);

numerics::HermitianAction hamiltonian_action(const SpinBathConfig& cfg, const GateSegment& seg);

/// Normalised e^{-beta H_E / 2}|r> for a Gaussian random |r> drawn from
/// (seed, sample_index).
numerics::StateVector thermal_environment(const SpinBathConfig& cfg, int sample_index);

struct SpinRunResult {
  statevector::Distribution dist;
  double duration = 0.0;  ///< ns
  double max_norm_error = 0.0;  ///< largest |1 - norm| over samples at the end
};

/// |00000> x thermal environment through every op's segments; marginal over
/// pc.measured_qubits averaged over thermal samples.
SpinRunResult run_circuit(const SpinBathConfig& cfg, const circuits::PhysicalCircuit& pc);

struct T2Result {
  double decay_time = 0.0;  ///< ns; +inf when <sigma^x> stays constant
  numerics::FitResult fit;
  std::vector<double> times;
  std::vector<double> values;
};

/// Prepares `qubit` in |+> (others |0>), environment at beta = 0, evolves with
/// all control fields off, samples <sigma^x> at n_samples uniform times in
/// [0, window] (averaged over thermal samples) and fits a damped cosine.
T2Result estimate_t2(const SpinBathConfig& cfg, int qubit, double window, int n_samples);

/// estimate_t2 with the window rescaled to about 4 T2 until the fitted decay
/// time lies in [window/8, window/2] (at most 6 rounds). Throws FitError when
/// no round yields a fit.
T2Result estimate_t2_adaptive(const SpinBathConfig& cfg, int qubit, int n_samples, double initial_window = 50.0);

}  // namespace ftlab::spinbath
