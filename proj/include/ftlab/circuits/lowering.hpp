#pragma once

#include <Eigen/Dense>

#include "ftlab/circuits/circuit.hpp"

namespace ftlab::circuits {

/// Two-qubit realisation on q3 (logical qubit 1) and q4 (logical qubit 2);
/// measured_qubits = {3, 4}.
PhysicalCircuit lower_bare(const LogicalCircuit& c);

/// [[4,2,2]] realisation on q1..q4 with ancilla q0; measured_qubits = {0,1,2,3,4}.
/// The ancilla check of the |00> preparation is deferred to the final
/// measurement.
PhysicalCircuit lower_encoded(const LogicalCircuit& c);

/// Preparation ops alone.
std::vector<PhysicalOp> bare_preparation(InitialState s);
std::vector<PhysicalOp> encoded_preparation(InitialState s);
std::vector<PhysicalOp> bare_gate(LogicalGate g);
std::vector<PhysicalOp> encoded_gate(LogicalGate g);

/// Two-qubit unitary of a logical gate. Basis index bit 0 is logical qubit 1,
/// bit 1 is logical qubit 2 (so X1 flips bit 0; HHS = SWAP (H x H)).
Eigen::Matrix4cd logical_unitary(LogicalGate g);

/// Normalised logical initial state in the same basis.
Eigen::Vector4cd logical_initial_state(InitialState s);

}  // namespace ftlab::circuits
