#include "ftlab/circuits/circuit.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <utility>

#include "ftlab/error.hpp"

namespace ftlab::circuits {
namespace {

constexpr std::array<std::pair<std::string_view, LogicalGate>, 6> kMnemonics{{
    {"X1", LogicalGate::X1},
    {"X2", LogicalGate::X2},
    {"Z1", LogicalGate::Z1},
    {"Z2", LogicalGate::Z2},
    {"HHS", LogicalGate::HHS},
    {"CZ", LogicalGate::CZ},
}};

struct Token {
  std::string_view text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back({s.substr(start, i - start), start});
  }
  return out;
}

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && out >= 0;
}

}  // namespace

PhysicalOp PhysicalOp::cnot(int control, int target) {
  if (control == target) throw DomainError("CNOT control and target must differ");
  return {OpKind::CNOT, control, target};
}

std::string_view to_string(LogicalGate g) {
  for (const auto& [name, gate] : kMnemonics) {
    if (gate == g) return name;
  }
  return "?";
}

std::string_view to_string(InitialState s) {
  switch (s) {
    case InitialState::ZeroZero: return "|00>";
    case InitialState::ZeroPlus: return "|0+>";
    case InitialState::PhiPlus: return "|Phi+>";
  }
  return "?";
}

std::string to_string(const PhysicalOp& op) {
  const std::string q = "q" + std::to_string(op.qubit);
  switch (op.kind) {
    case OpKind::X: return "X(" + q + ")";
    case OpKind::Z: return "Z(" + q + ")";
    case OpKind::S: return "S(" + q + ")";
    case OpKind::H: return "H(" + q + ")";
    case OpKind::CNOT: return "CNOT(" + q + ",q" + std::to_string(op.target) + ")";
  }
  return "?";
}

InitialState init_for_id(int id) {
  if (id < 0) throw DomainError("circuit id must be non-negative");
  return static_cast<InitialState>(id % 3);
}

LogicalCircuit parse_circuit(std::string_view text, InitialState init) {
  const auto tokens = tokenize(text);
  if (tokens.empty()) throw ParseError("empty circuit text", 0);

  LogicalCircuit c;
  c.init = init;
  std::size_t first = 0;
  if (const auto dash = tokens[0].text.find('-'); dash != std::string_view::npos) {
    int lo = 0;
    int hi = 0;
    if (!parse_int(tokens[0].text.substr(0, dash), lo) || !parse_int(tokens[0].text.substr(dash + 1), hi) ||
        hi < lo) {
      throw ParseError("malformed id range '" + std::string(tokens[0].text) + "'", tokens[0].pos);
    }
    c.id = lo;
    c.init = init_for_id(lo);
    first = 1;
  }

  const Token& last = tokens.back();
  if (last.text == "|00>") {
    c.init = InitialState::ZeroZero;
  } else if (last.text == "|0+>") {
    c.init = InitialState::ZeroPlus;
  } else if (last.text == "|Phi+>") {
    c.init = InitialState::PhiPlus;
  } else if (last.text != "|i>") {
    throw ParseError("circuit must end with a ket such as '|i>'", last.pos + last.text.size());
  }
  if (tokens.size() - 1 < first) throw ParseError("missing ket", text.size());

  for (std::size_t k = tokens.size() - 1; k-- > first;) {
    const auto it = std::find_if(kMnemonics.begin(), kMnemonics.end(),
                                 [&](const auto& m) { return m.first == tokens[k].text; });
    if (it == kMnemonics.end()) {
      throw ParseError("unknown gate mnemonic '" + std::string(tokens[k].text) + "'", tokens[k].pos);
    }
    c.gates.push_back(it->second);
  }
  return c;
}

std::string format_circuit(const LogicalCircuit& c) {
  std::string out;
  for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
    out += to_string(*it);
    out += ' ';
  }
  out += to_string(c.init);
  return out;
}

}  // namespace ftlab::circuits
