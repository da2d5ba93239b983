#include "ftlab/circuits/lowering.hpp"

#include <bit>
#include <cmath>
#include <complex>

namespace ftlab::circuits {
namespace {

using Op = PhysicalOp;

void append(std::vector<Op>& out, const std::vector<Op>& ops) { out.insert(out.end(), ops.begin(), ops.end()); }

}  // namespace

std::vector<PhysicalOp> bare_preparation(InitialState s) {
  switch (s) {
    case InitialState::ZeroZero: return {};
    case InitialState::ZeroPlus: return {Op::h(4)};
    case InitialState::PhiPlus: return {Op::h(3), Op::cnot(3, 4)};
  }
  return {};
}

std::vector<PhysicalOp> encoded_preparation(InitialState s) {
  switch (s) {
    case InitialState::ZeroZero:
      return {Op::h(3), Op::cnot(3, 2), Op::cnot(2, 1), Op::cnot(3, 4), Op::cnot(1, 0), Op::cnot(4, 0)};
    case InitialState::ZeroPlus: return {Op::h(2), Op::cnot(2, 1), Op::h(3), Op::cnot(3, 4)};
    case InitialState::PhiPlus: return {Op::h(3), Op::cnot(3, 2), Op::h(1), Op::cnot(1, 4)};
  }
  return {};
}

std::vector<PhysicalOp> bare_gate(LogicalGate g) {
  switch (g) {
    case LogicalGate::X1: return {Op::x(3)};
    case LogicalGate::X2: return {Op::x(4)};
    case LogicalGate::Z1: return {Op::z(3)};
    case LogicalGate::Z2: return {Op::z(4)};
    case LogicalGate::HHS: {
      std::vector<Op> out;
      for (int k = 0; k < 3; ++k) append(out, {Op::h(3), Op::h(4), Op::cnot(3, 4)});
      return out;
    }
    case LogicalGate::CZ: return {Op::h(4), Op::cnot(3, 4), Op::h(4)};
  }
  return {};
}

std::vector<PhysicalOp> encoded_gate(LogicalGate g) {
  switch (g) {
    case LogicalGate::X1: return {Op::x(1), Op::x(3)};
    case LogicalGate::X2: return {Op::x(1), Op::x(2)};
    case LogicalGate::Z1: return {Op::z(1), Op::z(2)};
    case LogicalGate::Z2: return {Op::z(1), Op::z(3)};
    case LogicalGate::HHS: return {Op::h(1), Op::h(2), Op::h(3), Op::h(4)};
    case LogicalGate::CZ: return {Op::s(1), Op::s(2), Op::s(3), Op::s(4), Op::z(2), Op::z(3)};
  }
  return {};
}

PhysicalCircuit lower_bare(const LogicalCircuit& c) {
  PhysicalCircuit pc;
  pc.ops = bare_preparation(c.init);
  for (auto g : c.gates) append(pc.ops, bare_gate(g));
  pc.measured_qubits = {3, 4};
  return pc;
}

PhysicalCircuit lower_encoded(const LogicalCircuit& c) {
  PhysicalCircuit pc;
  pc.ops = encoded_preparation(c.init);
  for (auto g : c.gates) append(pc.ops, encoded_gate(g));
  pc.measured_qubits = {0, 1, 2, 3, 4};
  return pc;
}

Eigen::Matrix4cd logical_unitary(LogicalGate g) {
  using C = std::complex<double>;
  Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
  switch (g) {
    case LogicalGate::X1:
      for (int k = 0; k < 4; ++k) m(k ^ 1, k) = 1.0;
      break;
    case LogicalGate::X2:
      for (int k = 0; k < 4; ++k) m(k ^ 2, k) = 1.0;
      break;
    case LogicalGate::Z1:
      for (int k = 0; k < 4; ++k) m(k, k) = (k & 1) ? -1.0 : 1.0;
      break;
    case LogicalGate::Z2:
      for (int k = 0; k < 4; ++k) m(k, k) = (k & 2) ? -1.0 : 1.0;
      break;
    case LogicalGate::CZ:
      for (int k = 0; k < 4; ++k) m(k, k) = k == 3 ? -1.0 : 1.0;
      break;
    case LogicalGate::HHS: {
      // <out|SWAP (H x H)|in>: H x H has entries (-1)^{popcount(in & mid)} / 2,
      // SWAP exchanges the two bits of mid.
      for (int in = 0; in < 4; ++in) {
        for (int mid = 0; mid < 4; ++mid) {
          const int out = ((mid & 1) << 1) | (mid >> 1);
          const int parity = std::popcount(static_cast<unsigned>(in & mid)) & 1;
          m(out, in) += C(parity ? -0.5 : 0.5, 0.0);
        }
      }
      break;
    }
  }
  return m;
}

Eigen::Vector4cd logical_initial_state(InitialState s) {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  const double r = 1.0 / std::sqrt(2.0);
  switch (s) {
    case InitialState::ZeroZero: v[0] = 1.0; break;
    case InitialState::ZeroPlus: v[0] = r; v[2] = r; break;  // |0>|+>: logical qubit 2 is bit 1
    case InitialState::PhiPlus: v[0] = r; v[3] = r; break;
  }
  return v;
}

}  // namespace ftlab::circuits
