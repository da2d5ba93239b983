#include <doctest.h>

#include <array>
#include <filesystem>

#include "dense_oracle.hpp"
#include "ftlab/circuits/lowering.hpp"
#include "ftlab/circuits/suite.hpp"
#include "ftlab/error.hpp"
#include "ftlab/statevector/simulator.hpp"

using namespace ftlab::circuits;
using namespace ftlab::statevector;
using ftlab::testing::cd;
using ftlab::testing::Mat;
using G = LogicalGate;

namespace {

const auto kSuite = load_suite(std::filesystem::path(FTLAB_DATA_DIR) / "suite.txt");

// Dense 32x32 matrix of a physical op from Kronecker products.
Mat dense_op(const PhysicalOp& op) {
  Mat u(2, 2);
  switch (op.kind) {
    case OpKind::X: u << 0, 1, 1, 0; break;
    case OpKind::Z: u << 1, 0, 0, -1; break;
    case OpKind::S: u << 1, 0, 0, cd(0, 1); break;
    case OpKind::H: u << M_SQRT1_2, M_SQRT1_2, M_SQRT1_2, -M_SQRT1_2; break;
    case OpKind::CNOT: {
      Mat p0(2, 2), p1(2, 2);
      p0 << 1, 0, 0, 0;
      p1 << 0, 0, 0, 1;
      return ftlab::testing::embed(p0, op.qubit, 5) +
             ftlab::testing::embed(p1, op.qubit, 5) * ftlab::testing::site_pauli('x', op.target, 5);
    }
  }
  return ftlab::testing::embed(u, op.qubit, 5);
}

Eigen::VectorXcd dense_run(const std::vector<PhysicalOp>& ops, Eigen::VectorXcd psi) {
  for (const auto& op : ops) psi = dense_op(op) * psi;
  return psi;
}

// Five-qubit basis index of the string q1q2q3q4 with q0 = 0.
Eigen::Index index_of(const char* q1q2q3q4) {
  Eigen::Index k = 0;
  for (int i = 0; i < 4; ++i) {
    if (q1q2q3q4[i] == '1') k |= Eigen::Index{1} << (i + 1);
  }
  return k;
}

Eigen::VectorXcd superposition(std::initializer_list<const char*> strings) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(32);
  for (const char* s : strings) v[index_of(s)] = 1.0;
  return v / v.norm();
}

// Logical basis codewords |b1 b2>_L, indexed b1 + 2 b2.
std::array<Eigen::VectorXcd, 4> codewords() {
  return {superposition({"0000", "1111"}), superposition({"1010", "0101"}), superposition({"1100", "0011"}),
          superposition({"0110", "1001"})};
}

Eigen::VectorXcd basis_state(Eigen::Index k) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(32);
  v[k] = 1.0;
  return v;
}

}  // namespace

TEST_CASE("bitstring conversions") {
  CHECK(to_bitstring(1, 2) == "10");
  CHECK(to_bitstring(0b11110, 5) == "01111");
  CHECK(from_bitstring("01111") == 0b11110);
  CHECK_THROWS_AS(from_bitstring("0a"), ftlab::ParseError);
}

TEST_CASE("run_ideal examples") {
  const auto phi = run_ideal(lower_bare({std::nullopt, InitialState::PhiPlus, {}}));
  CHECK(phi.probs[from_bitstring("00")] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(phi.probs[from_bitstring("11")] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(run_ideal(lower_bare({std::nullopt, InitialState::ZeroZero, {}})).probs[0] == 1.0);

  const auto enc = run_ideal(lower_encoded({std::nullopt, InitialState::ZeroZero, {}}));
  CHECK(enc.width == 5);
  CHECK(std::abs(enc.probs[from_bitstring("00000")] - 0.5) < 1e-15);
  CHECK(std::abs(enc.probs[from_bitstring("01111")] - 0.5) < 1e-15);
  CHECK(std::abs(enc.total() - 1.0) < 1e-15);
}

TEST_CASE("theory_distribution examples") {
  const auto five_cz = theory_distribution(kSuite[218]);
  CHECK(std::abs(five_cz.probs[from_bitstring("00")] - 0.5) < 1e-15);
  CHECK(std::abs(five_cz.probs[from_bitstring("11")] - 0.5) < 1e-15);
  const auto plus = theory_distribution({std::nullopt, InitialState::ZeroPlus, {}});
  CHECK(std::abs(plus.probs[from_bitstring("00")] - 0.5) < 1e-15);
  CHECK(std::abs(plus.probs[from_bitstring("01")] - 0.5) < 1e-15);
  CHECK(theory_distribution({std::nullopt, InitialState::ZeroZero, {G::X1}}).probs[from_bitstring("10")] == 1.0);
}

TEST_CASE("run_ideal agrees with the dense Kronecker oracle on all suite circuits") {
  Eigen::VectorXcd zero = basis_state(0);
  double worst = 0.0;
  for (const auto& c : kSuite) {
    for (const auto& pc : {lower_bare(c), lower_encoded(c)}) {
      const Eigen::VectorXcd fast = run_ideal_state(pc);
      worst = std::max(worst, (fast - dense_run(pc.ops, zero)).norm());
    }
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("theory_distribution equals ideal bare simulation for every suite circuit") {
  for (const auto& c : kSuite) {
    const auto d = run_ideal(lower_bare(c));
    CHECK(max_abs_difference(d, theory_distribution(c)) < 1e-12);
    CHECK(std::abs(d.total() - 1.0) < 1e-12);
  }
}

TEST_CASE("encoded outcomes stay in the code space") {
  for (const auto& c : kSuite) {
    const auto d = run_ideal(lower_encoded(c));
    CHECK(std::abs(d.total() - 1.0) < 1e-12);
    for (unsigned s = 0; s < 32; ++s) {
      const bool ancilla = s & 1U;
      const bool odd = std::popcount(s >> 1) % 2 == 1;
      if (ancilla || odd) CHECK(d.probs[s] < 1e-12);
    }
  }
}

TEST_CASE("encoded preparations produce the codewords") {
  const auto cw = codewords();
  const Eigen::VectorXcd zero_plus =
      superposition({"0000", "1100", "0011", "1111"});
  const Eigen::VectorXcd phi_plus = superposition({"0000", "0110", "1001", "1111"});
  CHECK((run_ideal_state(lower_encoded({std::nullopt, InitialState::ZeroZero, {}})) - cw[0]).norm() < 1e-12);
  CHECK((run_ideal_state(lower_encoded({std::nullopt, InitialState::ZeroPlus, {}})) - zero_plus).norm() < 1e-12);
  CHECK((run_ideal_state(lower_encoded({std::nullopt, InitialState::PhiPlus, {}})) - phi_plus).norm() < 1e-12);
  // Linear-combination identities of the encoded states.
  CHECK((zero_plus - (cw[0] + cw[2]) / std::sqrt(2.0)).norm() < 1e-12);
  CHECK((phi_plus - (cw[0] + cw[3]) / std::sqrt(2.0)).norm() < 1e-12);
}

TEST_CASE("encoded gates implement the logical gates on codewords") {
  const auto cw = codewords();
  for (auto g : {G::X1, G::X2, G::Z1, G::Z2, G::HHS, G::CZ}) {
    const Eigen::Matrix4cd u = logical_unitary(g);
    for (int in = 0; in < 4; ++in) {
      Eigen::VectorXcd psi = cw[static_cast<std::size_t>(in)];
      for (const auto& op : encoded_gate(g)) apply_op(psi, op);
      Eigen::VectorXcd expected = Eigen::VectorXcd::Zero(32);
      for (int out = 0; out < 4; ++out) expected += u(out, in) * cw[static_cast<std::size_t>(out)];
      INFO("gate " << to_string(g) << " codeword " << in);
      CHECK((psi - expected).norm() < 1e-12);
    }
  }
}

TEST_CASE("apply_op rejects ops outside the register") {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi[0] = 1.0;
  CHECK_THROWS_AS(apply_op(psi, PhysicalOp::x(3)), ftlab::DomainError);
  CHECK_THROWS_AS(PhysicalOp::cnot(2, 2), ftlab::DomainError);
}
