#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ftlab::circuits {

enum class LogicalGate { X1, X2, Z1, Z2, HHS, CZ };

enum class InitialState { ZeroZero, ZeroPlus, PhiPlus };

inline constexpr int kNumQubits = 5;

/// An initial state plus gates in application order (gates.front() acts first).
struct LogicalCircuit {
  std::optional<int> id;
  InitialState init = InitialState::ZeroZero;
  std::vector<LogicalGate> gates;

  bool operator==(const LogicalCircuit&) const = default;
};

enum class OpKind { X, Z, S, H, CNOT };

/// Primitive operation on physical qubits q0..q4. For CNOT, `qubit` is the
/// control and `target` the target; single-qubit ops leave target at -1.
struct PhysicalOp {
  OpKind kind = OpKind::X;
  int qubit = 0;
  int target = -1;

  static PhysicalOp x(int q) { return {OpKind::X, q, -1}; }
  static PhysicalOp z(int q) { return {OpKind::Z, q, -1}; }
  static PhysicalOp s(int q) { return {OpKind::S, q, -1}; }
  static PhysicalOp h(int q) { return {OpKind::H, q, -1}; }
  static PhysicalOp cnot(int control, int target);

  bool operator==(const PhysicalOp&) const = default;
};

struct PhysicalCircuit {
  std::vector<PhysicalOp> ops;
  /// Bit i of an outcome code is the result of measured_qubits[i].
  std::vector<int> measured_qubits;

  int width() const { return static_cast<int>(measured_qubits.size()); }
};

std::string_view to_string(LogicalGate g);
std::string_view to_string(InitialState s);
std::string to_string(const PhysicalOp& op);

/// Initial state used by circuit `id` of the suite: id mod 3 = 0, 1, 2 maps to
/// |00>, |0+>, |Phi+>.
InitialState init_for_id(int id);

/// Parses one circuit in suite notation, e.g. "HHS CZ |i>" or "258-260 HHS CZ |i>".
///
/// Text order is operator order, so the returned gates are reversed (the
/// rightmost mnemonic is applied first). The terminal ket may be "|i>"
/// (state taken from `init`, or from the first id of a range prefix) or an
/// explicit "|00>", "|0+>", "|Phi+>". Throws ParseError with the byte offset.
LogicalCircuit parse_circuit(std::string_view text, InitialState init = InitialState::ZeroZero);

/// Canonical text with an explicit ket, e.g. "HHS CZ |00>".
std::string format_circuit(const LogicalCircuit& c);

}  // namespace ftlab::circuits
