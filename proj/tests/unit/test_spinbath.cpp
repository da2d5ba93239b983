#include <doctest.h>

#include <filesystem>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "dense_oracle.hpp"
#include "ftlab/analysis/analysis.hpp"
#include "ftlab/circuits/lowering.hpp"
#include "ftlab/circuits/suite.hpp"
#include "ftlab/error.hpp"
#include "ftlab/spinbath/config_json.hpp"
#include "ftlab/spinbath/model.hpp"
#include "ftlab/statevector/simulator.hpp"

using namespace ftlab::spinbath;
using ftlab::circuits::PhysicalOp;
using ftlab::testing::cd;
using ftlab::testing::Mat;
using std::numbers::pi;

namespace {

const auto kSuite = ftlab::circuits::load_suite(std::filesystem::path(FTLAB_DATA_DIR) / "suite.txt");

// Kronecker product of single-site Paulis; sites not listed carry identity.
Mat pauli_string(const std::map<int, char>& ops, int n_sites) {
  Mat out = Mat::Identity(1, 1);
  for (int s = n_sites - 1; s >= 0; --s) {
    const auto it = ops.find(s);
    out = Eigen::kroneckerProduct(out, ftlab::testing::pauli(it == ops.end() ? 'i' : it->second)).eval();
  }
  return out;
}

// Dense H = H_Q + H_E + lambda H_QE assembled term by term.
Mat dense_hamiltonian(const SpinBathConfig& cfg, const Couplings& c, const GateSegment& seg) {
  const int n = kQubits + cfg.n_env;
  Mat h = Mat::Zero(Eigen::Index{1} << n, Eigen::Index{1} << n);
  const char axes[3] = {'x', 'y', 'z'};
  for (int q = 0; q < kQubits; ++q) {
    h -= seg.h_x[q] * pauli_string({{q, 'x'}}, n);
    h -= seg.h_z[q] * pauli_string({{q, 'z'}}, n);
    for (int m = q + 1; m < kQubits; ++m) h -= seg.g_x[q][m] * pauli_string({{q, 'x'}, {m, 'x'}}, n);
  }
  for (int b = 0; b < cfg.n_env; ++b) {
    const int i = kQubits + b;
    const int j = kQubits + (b + 1) % cfg.n_env;
    for (int a = 0; a < 3; ++a) h -= c.env[b][a] * pauli_string({{i, axes[a]}, {j, axes[a]}}, n);
  }
  for (int q = 0; q < kQubits; ++q) {
    for (int a = 0; a < 3; ++a) {
      h -= cfg.lambda * c.qubit_env[q][a] * pauli_string({{q, axes[a]}, {c.defect_map[q], axes[a]}}, n);
    }
  }
  return h;
}

// Qubit-register Hamiltonian of a segment on 5 sites.
Mat dense_qubit_hamiltonian(const GateSegment& seg) {
  Mat h = Mat::Zero(32, 32);
  for (int q = 0; q < kQubits; ++q) {
    h -= seg.h_x[q] * pauli_string({{q, 'x'}}, 5);
    h -= seg.h_z[q] * pauli_string({{q, 'z'}}, 5);
    for (int m = q + 1; m < kQubits; ++m) h -= seg.g_x[q][m] * pauli_string({{q, 'x'}, {m, 'x'}}, 5);
  }
  return h;
}

// Distance between unitaries modulo a global phase.
double phase_distance(const Mat& a, const Mat& b) {
  const cd overlap = (b.adjoint() * a).trace();
  const cd phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cd(1);
  return (a - phase * b).norm();
}

Mat target_unitary(const PhysicalOp& op) {
  Mat u(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  switch (op.kind) {
    case ftlab::circuits::OpKind::X: u << 0, 1, 1, 0; break;
    case ftlab::circuits::OpKind::Z: u << 1, 0, 0, -1; break;
    case ftlab::circuits::OpKind::S: u << 1, 0, 0, cd(0, -1); break;  // realised as S^dagger
    case ftlab::circuits::OpKind::H: u << r, r, r, -r; break;
    case ftlab::circuits::OpKind::CNOT: {
      Mat p0(2, 2), p1(2, 2);
      p0 << 1, 0, 0, 0;
      p1 << 0, 0, 0, 1;
      return ftlab::testing::embed(p0, op.qubit, 5) +
             ftlab::testing::embed(p1, op.qubit, 5) * pauli_string({{op.target, 'x'}}, 5);
    }
  }
  return ftlab::testing::embed(u, op.qubit, 5);
}

SpinBathConfig small_config(double lambda, std::uint64_t seed = 3) {
  SpinBathConfig cfg;
  cfg.lambda = lambda;
  cfg.n_env = 5;
  cfg.seed = seed;
  cfg.n_thermal_samples = 1;
  return cfg;
}

}  // namespace

TEST_CASE("build_segment examples") {
  const auto x = build_segment(PhysicalOp::x(0));
  REQUIRE(x.size() == 1);
  CHECK(x[0].h_x[0] == 1.0);
  CHECK(x[0].duration == doctest::Approx(pi / 2));

  const auto z = build_segment(PhysicalOp::z(2));
  REQUIRE(z.size() == 1);
  CHECK(z[0].h_z[2] == 16.0);
  CHECK(z[0].duration == doctest::Approx(pi / 32));

  const auto cnot = build_segment(PhysicalOp::cnot(1, 0));
  REQUIRE(cnot.size() == 3);
  CHECK(cnot[0].h_x[1] == 15.5);
  CHECK(cnot[0].h_z[1] == 15.5);
  CHECK(cnot[1].duration == doctest::Approx(10 * pi));
  CHECK(cnot[1].h_x[0] == -0.025);
  CHECK(cnot[1].h_x[1] == -0.025);
  CHECK(cnot[1].g_x[0][1] == 0.025);
  for (const auto& s : cnot) {
    for (int q = 2; q < 5; ++q) CHECK((s.h_x[q] == 0.0 && s.h_z[q] == 0.0));
  }
}

TEST_CASE("every segment realises its gate up to a global phase") {
  std::vector<PhysicalOp> ops;
  for (int q = 0; q < 5; ++q) {
    for (auto op : {PhysicalOp::x(q), PhysicalOp::z(q), PhysicalOp::s(q), PhysicalOp::h(q)}) ops.push_back(op);
  }
  for (auto [c, t] : {std::pair{3, 4}, {3, 2}, {2, 1}, {1, 0}, {4, 0}, {1, 4}, {4, 3}}) ops.push_back(PhysicalOp::cnot(c, t));
  for (const auto& op : ops) {
    Mat u = Mat::Identity(32, 32);
    for (const auto& seg : build_segment(op)) {
      u = ftlab::testing::dense_propagator(dense_qubit_hamiltonian(seg), seg.duration) * u;
    }
    INFO(ftlab::circuits::to_string(op));
    CHECK(phase_distance(u, target_unitary(op)) < 1e-10);
  }
}

TEST_CASE("circuit_duration sums the gate times") {
  const auto pc = ftlab::circuits::lower_encoded(kSuite[0]);
  // H3, CX(3,2), CX(2,1), CX(3,4), CX(1,0), CX(4,0): each CNOT is H_c I H_c.
  auto th = [](int n) { return pi / std::sqrt(2.0) / (30 + n); };
  const double expected = th(3) + (2 * th(3) + 10 * pi) + (2 * th(2) + 10 * pi) + (2 * th(3) + 10 * pi) +
                          (2 * th(1) + 10 * pi) + (2 * th(4) + 10 * pi);
  CHECK(circuit_duration(pc) == doctest::Approx(expected).epsilon(1e-14));
  CHECK(run_circuit(small_config(0.0), pc).duration == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("realize_couplings is reproducible and valid") {
  SpinBathConfig cfg = small_config(0.1);
  cfg.n_env = 12;
  const auto a = realize_couplings(cfg);
  const auto b = realize_couplings(cfg);
  CHECK(a.defect_map == b.defect_map);
  CHECK(a.env == b.env);
  std::set<int> sites(a.defect_map.begin(), a.defect_map.end());
  CHECK(sites.size() == 5);
  for (int s : sites) CHECK((s >= 5 && s <= 16));
  for (const auto& bond : a.env) {
    for (double j : bond) CHECK(std::abs(j) <= 2.0);
  }
  for (const auto& k : a.qubit_env) {
    for (double v : k) CHECK(std::abs(v) == 2.0);
  }
  cfg.k_distribution = KDistribution::UniformMagnitude;
  for (const auto& k : realize_couplings(cfg).qubit_env) {
    for (double v : k) CHECK((std::abs(v) >= 1.8 && std::abs(v) <= 2.2));
  }
  cfg.seed = 99;
  CHECK(realize_couplings(cfg).env != a.env);
}

TEST_CASE("matrix-free Hamiltonian equals the dense assembly at N_E = 5") {
  const SpinBathConfig cfg = small_config(0.37);
  const auto c = realize_couplings(cfg);
  GateSegment seg = build_segment(PhysicalOp::cnot(3, 1))[1];
  seg.h_z[0] = 0.7;
  const Mat dense = dense_hamiltonian(cfg, c, seg);
  const auto action = hamiltonian_action(cfg, seg);
  REQUIRE(action.dim == 1024);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < 1024; ++k) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(1024);
    e[k] = 1.0;
    worst = std::max(worst, (action(e) - dense.col(k)).norm());
  }
  CHECK(worst < 1e-12);
  Eigen::SelfAdjointEigenSolver<Mat> es(dense);
  CHECK(es.eigenvalues().maxCoeff() <= action.bound_hi);
  CHECK(es.eigenvalues().minCoeff() >= action.bound_lo);
}

TEST_CASE("Hamiltonian action is Hermitian and bounded") {
  SpinBathConfig cfg = small_config(0.2);
  cfg.n_env = 8;
  const auto h = hamiltonian_action(cfg, build_segment(PhysicalOp::h(2))[0]);
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const auto u = ftlab::testing::random_state(h.dim, rng);
    const auto v = ftlab::testing::random_state(h.dim, rng);
    CHECK(std::abs(u.dot(h(v)) - h(u).dot(v)) < 1e-10);
    CHECK(h(v).norm() <= std::max(std::abs(h.bound_lo), std::abs(h.bound_hi)));
  }
}

TEST_CASE("at lambda = 0 the qubit factor is untouched by the environment") {
  const SpinBathConfig cfg = small_config(0.0);
  const auto c = realize_couplings(cfg);
  const auto h = hamiltonian_action(cfg, GateSegment{});
  const auto h_env = environment_hamiltonian(cfg, c).action();
  std::mt19937_64 rng(9);
  const auto q = ftlab::testing::random_state(32, rng);
  const auto e = ftlab::testing::random_state(32, rng);
  Eigen::VectorXcd psi(1024);
  for (Eigen::Index k = 0; k < 1024; ++k) psi[k] = q[k & 31] * e[k >> 5];
  const Eigen::VectorXcd he = h_env(e);
  Eigen::VectorXcd expected(1024);
  for (Eigen::Index k = 0; k < 1024; ++k) expected[k] = q[k & 31] * he[k >> 5];
  CHECK((h(psi) - expected).norm() < 1e-12);
}

TEST_CASE("thermal_environment") {
  SpinBathConfig cfg = small_config(0.0);
  cfg.beta = 0.0;
  cfg.n_env = 10;
  const auto a = thermal_environment(cfg, 0);
  const auto b = thermal_environment(cfg, 1);
  CHECK(std::abs(a.norm() - 1.0) < 1e-12);
  CHECK(std::norm(a.dot(b)) < 10.0 / 1024.0);
  CHECK((thermal_environment(cfg, 0) - a).norm() == 0.0);

  cfg.n_env = 6;
  cfg.beta = 50.0;
  const auto c = realize_couplings(cfg);
  Mat h = Mat::Zero(64, 64);
  const char axes[3] = {'x', 'y', 'z'};
  for (int bnd = 0; bnd < 6; ++bnd) {
    for (int ax = 0; ax < 3; ++ax) h -= c.env[bnd][ax] * pauli_string({{bnd, axes[ax]}, {(bnd + 1) % 6, axes[ax]}}, 6);
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const auto cold = thermal_environment(cfg, 0);
  double ground_weight = 0.0;
  for (Eigen::Index k = 0; k < 64; ++k) {
    if (es.eigenvalues()[k] < es.eigenvalues()[0] + 1e-8) ground_weight += std::norm(es.eigenvectors().col(k).dot(cold));
  }
  CHECK(ground_weight > 0.999);
}

TEST_CASE("run_circuit at lambda = 0 reproduces the ideal backend") {
  SpinBathConfig cfg = small_config(0.0);
  cfg.beta = 1.0;
  cfg.n_thermal_samples = 2;
  for (int id : {0, 1, 2, 171, 258, 272}) {
    for (const auto& pc : {ftlab::circuits::lower_bare(kSuite[id]), ftlab::circuits::lower_encoded(kSuite[id])}) {
      const auto r = run_circuit(cfg, pc);
      INFO("id " << id << " width " << pc.width());
      CHECK(ftlab::statevector::max_abs_difference(r.dist, ftlab::statevector::run_ideal(pc)) < 1e-10);
      CHECK(r.max_norm_error < 1e-9);
    }
  }
  const auto prep = run_circuit(cfg, ftlab::circuits::lower_encoded(kSuite[0])).dist;
  CHECK(std::abs(prep.probs[ftlab::statevector::from_bitstring("00000")] - 0.5) < 1e-10);
  CHECK(std::abs(prep.probs[ftlab::statevector::from_bitstring("01111")] - 0.5) < 1e-10);
}

TEST_CASE("run_circuit is deterministic and conserves the norm at finite coupling") {
  const SpinBathConfig cfg = small_config(0.1);
  const auto pc = ftlab::circuits::lower_encoded(kSuite[2]);
  const auto a = run_circuit(cfg, pc);
  const auto b = run_circuit(cfg, pc);
  CHECK(a.dist.probs == b.dist.probs);
  CHECK(a.max_norm_error < 1e-9);
  CHECK(std::abs(a.dist.total() - 1.0) < 1e-9);
  CHECK(ftlab::statevector::max_abs_difference(a.dist, ftlab::statevector::run_ideal(pc)) > 1e-3);
}

TEST_CASE("estimate_t2 without coupling reports no decay") {
  SpinBathConfig cfg = small_config(0.0);
  const auto r = estimate_t2(cfg, 0, 50.0, 16);
  CHECK(std::isinf(r.decay_time));
  for (double v : r.values) CHECK(std::abs(v - 1.0) < 1e-10);
  CHECK_THROWS_AS(estimate_t2(cfg, 0, 50.0, 4), ftlab::DomainError);
}

TEST_CASE("estimate_t2 recovers a finite decay time at finite coupling") {
  SpinBathConfig cfg = small_config(0.2);
  cfg.n_env = 6;
  const auto r = estimate_t2(cfg, 1, 30.0, 61);
  CHECK(std::isfinite(r.decay_time));
  CHECK(r.decay_time > 0.0);
  CHECK(std::abs(r.values.front() - 1.0) < 1e-12);
}

TEST_CASE("config JSON round trip and validation") {
  SpinBathConfig cfg;
  cfg.lambda = 0.1;
  cfg.n_env = 7;
  cfg.seed = 42;
  cfg.k_distribution = KDistribution::UniformMagnitude;
  const auto back = config_from_json(config_to_json(cfg));
  CHECK(back.lambda == 0.1);
  CHECK(back.n_env == 7);
  CHECK(back.seed == 42);
  CHECK(back.k_distribution == KDistribution::UniformMagnitude);
  CHECK(back.n_thermal_samples == 10);
  CHECK_THROWS_AS(config_from_json({{"lambda", 0.1}, {"bogus", 1}}), ftlab::ConfigError);
  CHECK_THROWS_AS(config_from_json({{"n_env", 3}}), ftlab::ConfigError);
  CHECK_THROWS_AS(config_from_json({{"lambda", "big"}}), ftlab::ConfigError);
  CHECK_THROWS_AS(config_from_json({{"lambda", -1.0}}), ftlab::ConfigError);
  CHECK(cfg.thermal_samples() == 10);
  cfg.n_env = 12;
  CHECK(cfg.thermal_samples() == 1);
}

TEST_CASE("PauliSum handles Y strings") {
  PauliSum p(3);
  p.add_pair(0.7, 'y', 0, 2);
  p.add_single(-0.3, 'x', 1);
  p.add(0.2, 0b111, 0b110);  // X0 Y1 Y2
  const Mat dense = 0.7 * pauli_string({{0, 'y'}, {2, 'y'}}, 3) - 0.3 * pauli_string({{1, 'x'}}, 3) +
                    0.2 * pauli_string({{0, 'x'}, {1, 'y'}, {2, 'y'}}, 3);
  const auto a = p.action();
  for (Eigen::Index k = 0; k < 8; ++k) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(8);
    e[k] = 1.0;
    CHECK((a(e) - dense.col(k)).norm() < 1e-15);
  }
  CHECK(p.l1_norm() == doctest::Approx(1.2));
  PauliSum odd(2);
  odd.add_single(1.0, 'y', 0);
  CHECK_THROWS_AS(odd.action(), ftlab::ConfigError);
}
