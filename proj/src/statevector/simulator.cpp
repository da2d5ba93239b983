#include "ftlab/statevector/simulator.hpp"

#include <cmath>
#include <complex>

#include "ftlab/circuits/lowering.hpp"
#include "ftlab/error.hpp"

namespace ftlab::statevector {

using circuits::OpKind;
using circuits::PhysicalOp;
using cplx = std::complex<double>;

Eigen::Matrix2cd single_qubit_matrix(OpKind kind) {
  Eigen::Matrix2cd m;
  const double r = 1.0 / std::sqrt(2.0);
  switch (kind) {
    case OpKind::X: m << 0, 1, 1, 0; break;
    case OpKind::Z: m << 1, 0, 0, -1; break;
    case OpKind::S: m << 1, 0, 0, cplx(0, 1); break;
    case OpKind::H: m << r, r, r, -r; break;
    case OpKind::CNOT: throw DomainError("CNOT is not a single-qubit op");
  }
  return m;
}

void apply_op(Eigen::VectorXcd& state, const PhysicalOp& op) {
  const auto dim = static_cast<std::size_t>(state.size());
  const std::size_t bit = std::size_t{1} << op.qubit;
  if (bit >= dim) throw DomainError("op acts outside the register: " + circuits::to_string(op));
  if (op.kind == OpKind::CNOT) {
    const std::size_t tbit = std::size_t{1} << op.target;
    if (tbit >= dim) throw DomainError("op acts outside the register: " + circuits::to_string(op));
    for (std::size_t k = 0; k < dim; ++k) {
      if ((k & bit) && !(k & tbit)) std::swap(state[k], state[k | tbit]);
    }
    return;
  }
  const Eigen::Matrix2cd u = single_qubit_matrix(op.kind);
  for (std::size_t k = 0; k < dim; ++k) {
    if (k & bit) continue;
    const cplx a0 = state[k];
    const cplx a1 = state[k | bit];
    state[k] = u(0, 0) * a0 + u(0, 1) * a1;
    state[k | bit] = u(1, 0) * a0 + u(1, 1) * a1;
  }
}

Eigen::VectorXcd run_ideal_state(const circuits::PhysicalCircuit& pc) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(1 << circuits::kNumQubits);
  psi[0] = 1.0;
  for (const auto& op : pc.ops) apply_op(psi, op);
  return psi;
}

Distribution marginal(const Eigen::VectorXcd& state, std::span<const int> measured_qubits) {
  Distribution d(static_cast<int>(measured_qubits.size()));
  for (Eigen::Index k = 0; k < state.size(); ++k) {
    unsigned code = 0;
    for (std::size_t i = 0; i < measured_qubits.size(); ++i) {
      if ((static_cast<std::size_t>(k) >> measured_qubits[i]) & 1U) code |= 1U << i;
    }
    d.probs[code] += std::norm(state[k]);
  }
  return d;
}

Distribution run_ideal(const circuits::PhysicalCircuit& pc) {
  return marginal(run_ideal_state(pc), pc.measured_qubits);
}

Distribution theory_distribution(const circuits::LogicalCircuit& c) {
  Eigen::Vector4cd psi = circuits::logical_initial_state(c.init);
  for (auto g : c.gates) psi = circuits::logical_unitary(g) * psi;
  Distribution d(2);
  for (int k = 0; k < 4; ++k) d.probs[static_cast<std::size_t>(k)] = std::norm(psi[k]);
  return d;
}

}  // namespace ftlab::statevector
