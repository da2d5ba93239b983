#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "ftlab/circuits/circuit.hpp"
#include "ftlab/numerics/nelder_mead.hpp"
#include "ftlab/statevector/distribution.hpp"
#include "ftlab/transmon/device.hpp"
#include "ftlab/transmon/pulse.hpp"

namespace ftlab::transmon {

inline constexpr double kDefaultTau = 0.001;  // ns

/// Truncated-eigenbasis model of a device subsystem: 4 levels per transmon,
/// 4 Fock states per resonator. Immutable after construction.
class TransmonModel {
 public:
  TransmonModel(const TransmonDevice& device, Subsystem subsystem, int n_charge_max = 17);

  const TransmonDevice& device() const { return device_; }
  const Subsystem& subsystem() const { return subsystem_; }
  int sites() const { return subsystem_.sites(); }
  Eigen::Index dim() const { return dim_; }
  Eigen::Index stride(int site) const { return strides_[site]; }

  /// Site of device transmon q, or -1 when q is not simulated.
  int site_of(int qubit) const;
  const TransmonLevels& levels(int qubit) const { return levels_[site_of(qubit)]; }

  /// Diagonal part A: transmon eigenenergies plus resonator energies (rad/ns).
  const Eigen::VectorXd& diagonal() const { return diagonal_; }

  struct Coupling {
    int transmon_site;
    int resonator_site;
    double g;  // rad/ns
  };
  /// Transmon-resonator couplings present in the subsystem, in the fixed
  /// order used by the splitting (resonator order, then transmon order).
  const std::vector<Coupling>& couplings() const { return couplings_; }

  /// Product basis index with the given per-site levels.
  Eigen::Index index_of(const std::vector<int>& site_levels) const;
  int level(Eigen::Index index, int site) const { return static_cast<int>((index / strides_[site]) % kLevels); }

  /// Dense static Hamiltonian (drive off); available for dim <= 4096.
  Eigen::MatrixXcd dense_hamiltonian(const std::vector<double>& n_g = {}) const;

  /// Qubit frequency (GHz) used for the rotating frame of transmon q: the
  /// table value on the full device, otherwise the dressed 0-1 transition of
  /// the static subsystem Hamiltonian.
  double qubit_frequency(int qubit) const;

 private:
  TransmonDevice device_;
  Subsystem subsystem_;
  Eigen::Index dim_ = 1;
  std::vector<Eigen::Index> strides_;
  std::vector<TransmonLevels> levels_;
  Eigen::VectorXd diagonal_;
  std::vector<Coupling> couplings_;
  std::array<double, kTransmons> frame_freq_{};
};

/// n_g per transmon site at time t (filled into the span; sites with no drive
/// left at zero).
using DriveFunction = std::function<void(double t, std::vector<double>& n_g)>;

/// Advances the columns of `states` from t_begin to t_end with the symmetric
/// second-order splitting
///   e^{-i tau A/2} C_1 ... C_k D(t_mid) C_k ... C_1 e^{-i tau A/2},
/// where C_j = exp(-i tau/2 G n (a + a^dag)) per coupling and D is the drive
/// factor prod_i exp(i tau 8 E_C n_g,i(t_mid) n_i). The step is adjusted to
/// divide the span exactly. Throws ConfigError on a dimension mismatch.
void trotter_evolve(const TransmonModel& model, Eigen::MatrixXcd& states, const DriveFunction& drive,
                    double t_begin, double t_end, double tau = kDefaultTau);

/// A pulse placed on the common clock.
struct ScheduledPulse {
  int qubit = 0;
  Pulse pulse;
  double start = 0.0;
};

/// Serialized pulse sequence plus the virtual frame phase per qubit left
/// after the last op. A frame phase phi adds to gamma of later pulses on that
/// qubit and stands for the virtual rotation diag(1, e^{-i phi}).
struct Schedule {
  std::vector<ScheduledPulse> pulses;
  double duration = 0.0;
  std::array<double, kTransmons> frame{};
};

/// X -> xpih xpih; H -> VZ(pi/2) xpih VZ(pi/2); Z -> VZ(pi); S -> VZ(-pi/2);
/// CNOT(c,t) -> echoed cross resonance: flat-top CR on c at f_T with +s
/// Omega_CR, pi pulse on c, CR with -s Omega_CR, pi pulse on c, then a pi/2
/// pulse on t (Omega_T, beta_T) and VZ on c. s = sign(f_C - f_T) orients the
/// echo so that the ZX rotation has the sign a CNOT needs. Throws
/// CompileError naming any op without a library entry.
Schedule compile_to_pulses(const circuits::PhysicalCircuit& pc, const PulseLibrary& lib);
Schedule compile_op(const circuits::PhysicalOp& op, const PulseLibrary& lib);

/// Evolves the columns of `states` through the schedule starting at t = 0.
void run_schedule(const TransmonModel& model, const Schedule& schedule, Eigen::MatrixXcd& states,
                  double tau = kDefaultTau);

struct TransmonRunResult {
  statevector::Distribution dist;  // renormalised over computational outcomes
  double leakage = 0.0;            // probability of any transmon level >= 2
  double duration = 0.0;
};

/// Runs pc from the all-ground state. Outcomes are read on pc's measured
/// qubits. Throws ConfigError when the subsystem lacks a qubit pc uses.
TransmonRunResult run_circuit(const TransmonModel& model, const PulseLibrary& lib,
                              const circuits::PhysicalCircuit& pc, double tau = kDefaultTau);

/// Matrix of a schedule on the computational subspace of `qubits` (bit i of
/// the row/column index = level of qubits[i]; other transmons ground,
/// resonators vacuum), in the frame rotating at each qubit's frequency and
/// including the schedule's trailing virtual frames.
Eigen::MatrixXcd gate_matrix(const TransmonModel& model, const Schedule& schedule, const std::vector<int>& qubits,
                             double tau = kDefaultTau);

/// gate_matrix of a compiled op over its qubits in ascending order.
Eigen::MatrixXcd gate_matrix(const TransmonModel& model, const PulseLibrary& lib, const circuits::PhysicalOp& op,
                             double tau = kDefaultTau);

/// Ideal unitary of op over its qubits in ascending order.
Eigen::MatrixXcd target_unitary(const circuits::PhysicalOp& op);

/// exp(+i pi/4 sigma_x): a gamma = 0 Gaussian drives a rotation about -x.
Eigen::Matrix2cd xpih_target();

struct GateMetrics {
  double delta = 0.0;
  double f_avg = 0.0;
  double unitarity = 0.0;
};

/// delta = min_phi ||m - e^{i phi} u||_F^2 / (2d) = (Tr m^dag m + d - 2|Tr u^dag m|) / (2d);
/// f_avg = (Tr m^dag m + |Tr u^dag m|^2) / (d (d + 1));
/// unitarity = sum over non-identity Pauli pairs of |R_ij|^2 / (d^2 - 1), with
/// R_ij = Tr(P_i m P_j m^dag) / d the Pauli transfer matrix of rho -> m rho m^dag.
/// d must be 2 or 4 for the unitarity; throws ConfigError on shape mismatch.
GateMetrics gate_metrics(const Eigen::MatrixXcd& m, const Eigen::MatrixXcd& target);

/// Library with every drive frequency replaced by the model's qubit
/// frequency (f, f_C and f_T), for use on subsystems whose dressed
/// frequencies differ from the full-device table.
PulseLibrary retarget_library(const PulseLibrary& lib, const TransmonModel& model);

/// Nelder-Mead settings for pulse searches: 150 iterations, tol_f 1e-9, tol_x 1e-4.
numerics::NelderMeadOptions pulse_optimizer_options();

struct XpihOptimization {
  XpihParams initial;
  XpihParams best;
  GateMetrics initial_metrics;
  GateMetrics best_metrics;
  std::vector<double> history;  // best delta after each iteration
  int evaluations = 0;
};

/// Minimises delta of the xpih pulse on `initial.qubit` over (Omega_X, beta_X),
/// and also f when tune_freq.
XpihOptimization optimize_xpih(const TransmonModel& model, const XpihParams& initial, bool tune_freq,
                               double tau = kDefaultTau,
                               numerics::NelderMeadOptions options = pulse_optimizer_options());

struct CnotOptimization {
  CnotParams initial;
  CnotParams best;
  GateMetrics initial_metrics;
  GateMetrics best_metrics;
  std::vector<double> history;
  int evaluations = 0;
};

/// Minimises delta of the echoed CR CNOT over (Omega_CR, T_CR, Omega_C, beta_C),
/// plus f_T when tune_freq. Single-qubit pulses come from `lib`.
CnotOptimization optimize_cnot(const TransmonModel& model, const PulseLibrary& lib, const CnotParams& initial,
                               bool tune_freq, double tau = kDefaultTau,
                               numerics::NelderMeadOptions options = pulse_optimizer_options());

}  // namespace ftlab::transmon
