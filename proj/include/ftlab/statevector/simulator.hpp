#pragma once

#include <Eigen/Dense>
#include <span>

#include "ftlab/circuits/circuit.hpp"
#include "ftlab/statevector/distribution.hpp"

namespace ftlab::statevector {

/// 2x2 unitary of a single-qubit op (S = diag(1, i)).
Eigen::Matrix2cd single_qubit_matrix(circuits::OpKind kind);

/// Applies op in place to a state on n qubits, where basis bit q is qubit q.
void apply_op(Eigen::VectorXcd& state, const circuits::PhysicalOp& op);

/// Final 5-qubit state of pc from |00000> (basis bit q = qubit q).
Eigen::VectorXcd run_ideal_state(const circuits::PhysicalCircuit& pc);

/// Marginal of |amplitude|^2 over the measured qubits of a state on
/// n qubits whose low bits are the register.
Distribution marginal(const Eigen::VectorXcd& state, std::span<const int> measured_qubits);

/// Exact outcome distribution of pc (no sampling).
Distribution run_ideal(const circuits::PhysicalCircuit& pc);

/// Distribution over (logical qubit 1, logical qubit 2) from the logical
/// unitaries; bit 0 is logical qubit 1, matching lower_bare's q3q4 order.
Distribution theory_distribution(const circuits::LogicalCircuit& c);

}  // namespace ftlab::statevector
