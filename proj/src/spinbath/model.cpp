#include "ftlab/spinbath/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <tuple>

#include "ftlab/error.hpp"
#include "ftlab/statevector/simulator.hpp"

namespace ftlab::spinbath {
namespace {

using circuits::OpKind;
using numerics::StateVector;
using std::numbers::pi;

constexpr std::uint64_t kCouplingStream = 0x636f75706c696e67ULL;
constexpr std::uint64_t kThermalStream = 0x746865726d616cULL;
constexpr char kAxes[3] = {'x', 'y', 'z'};

double field(int n) { return 15.0 + 0.5 * n; }

GateSegment hadamard_segment(int n) {
  GateSegment s;
  s.h_x[static_cast<std::size_t>(n)] = field(n);
  s.h_z[static_cast<std::size_t>(n)] = field(n);
  s.duration = pi / std::sqrt(2.0) / (30.0 + n);
  return s;
}

void check_qubit(int q) {
  if (q < 0 || q >= kQubits) throw DomainError("spin-bath qubit index out of range");
}

PauliSum qubit_hamiltonian(int n_sites, const GateSegment& seg) {
  PauliSum h(n_sites);
  for (int n = 0; n < kQubits; ++n) {
    h.add_single(-seg.h_x[static_cast<std::size_t>(n)], 'x', n);
    h.add_single(-seg.h_z[static_cast<std::size_t>(n)], 'z', n);
    for (int m = n + 1; m < kQubits; ++m) h.add_pair(-seg.g_x[static_cast<std::size_t>(n)][static_cast<std::size_t>(m)], 'x', n, m);
  }
  return h;
}

// Expectation <psi| sigma^x_q |psi>.
double sigma_x(const StateVector& psi, int q) {
  const Eigen::Index bit = Eigen::Index{1} << q;
  double s = 0.0;
  for (Eigen::Index k = 0; k < psi.size(); ++k) s += std::real(std::conj(psi[k ^ bit]) * psi[k]);
  return s;
}

}  // namespace

void SpinBathConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be finite and >= 0");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw ConfigError("beta must be finite and >= 0");
  if (n_env < kMinEnv || n_env > kMaxEnv) throw ConfigError("n_env must lie in [5, 27]");
  if (!(j_scale >= 0.0) || !(k_magnitude >= 0.0)) throw ConfigError("coupling scales must be >= 0");
  if (n_thermal_samples < 0) throw ConfigError("n_thermal_samples must be >= 0");
  if (!(tol > 0.0 && tol <= 1e-6)) throw ConfigError("tol must lie in (0, 1e-6]");
}

Couplings realize_couplings(const SpinBathConfig& cfg) {
  cfg.validate();
  std::seed_seq seq{cfg.seed, kCouplingStream};
  std::mt19937_64 rng(seq);
  Couplings c;

  std::vector<int> sites(static_cast<std::size_t>(cfg.n_env));
  std::iota(sites.begin(), sites.end(), kQubits);
  std::shuffle(sites.begin(), sites.end(), rng);
  std::copy_n(sites.begin(), kQubits, c.defect_map.begin());

  std::uniform_real_distribution<double> j(-cfg.j_scale, cfg.j_scale);
  c.env.resize(static_cast<std::size_t>(cfg.n_env));
  for (auto& bond : c.env) {
    for (double& v : bond) v = j(rng);
  }

  std::bernoulli_distribution sign(0.5);
  std::uniform_real_distribution<double> mag(0.9 * cfg.k_magnitude, 1.1 * cfg.k_magnitude);
  for (auto& k : c.qubit_env) {
    for (double& v : k) {
      const double m = cfg.k_distribution == KDistribution::FixedMagnitude ? cfg.k_magnitude : mag(rng);
      v = sign(rng) ? m : -m;
    }
  }
  return c;
}

std::vector<GateSegment> build_segment(const circuits::PhysicalOp& op) {
  check_qubit(op.qubit);
  const int n = op.qubit;
  const auto un = static_cast<std::size_t>(n);
  GateSegment s;
  switch (op.kind) {
    case OpKind::X:
      s.h_x[un] = 1.0;
      s.duration = pi / 2.0;
      return {s};
    case OpKind::Z:
      s.h_z[un] = field(n);
      s.duration = pi / (30.0 + n);
      return {s};
    case OpKind::S:
      s.h_z[un] = field(n);
      s.duration = pi / (60.0 + 2.0 * n);
      return {s};
    case OpKind::H: return {hadamard_segment(n)};
    case OpKind::CNOT: {
      check_qubit(op.target);
      const auto um = static_cast<std::size_t>(op.target);
      GateSegment i;
      i.h_x[un] = -0.025;
      i.h_x[um] = -0.025;
      i.g_x[std::min(un, um)][std::max(un, um)] = 0.025;
      i.g_x[std::max(un, um)][std::min(un, um)] = 0.025;
      i.duration = 10.0 * pi;
      return {hadamard_segment(n), i, hadamard_segment(n)};
    }
  }
  return {};
}

double circuit_duration(const circuits::PhysicalCircuit& pc) {
  double t = 0.0;
  for (const auto& op : pc.ops) {
    for (const auto& s : build_segment(op)) t += s.duration;
  }
  return t;
}

PauliSum environment_hamiltonian(const SpinBathConfig& cfg, const Couplings& c) {
  PauliSum h(cfg.n_env);
  for (int b = 0; b < cfg.n_env; ++b) {
    const int next = (b + 1) % cfg.n_env;
    if (next == b) continue;
    for (int a = 0; a < 3; ++a) h.add_pair(-c.env[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)], kAxes[a], b, next);
  }
  return h;
}

PauliSum total_hamiltonian(const SpinBathConfig& cfg, const Couplings& c, const GateSegment& seg) {
  const int n_sites = kQubits + cfg.n_env;
  PauliSum h = qubit_hamiltonian(n_sites, seg);
  for (int b = 0; b < cfg.n_env; ++b) {
    const int next = (b + 1) % cfg.n_env;
    for (int a = 0; a < 3; ++a) {
      h.add_pair(-c.env[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)], kAxes[a], kQubits + b, kQubits + next);
    }
  }
  if (cfg.lambda != 0.0) {
    for (int n = 0; n < kQubits; ++n) {
      for (int a = 0; a < 3; ++a) {
        h.add_pair(-cfg.lambda * c.qubit_env[static_cast<std::size_t>(n)][static_cast<std::size_t>(a)], kAxes[a], n,
                   c.defect_map[static_cast<std::size_t>(n)]);
      }
    }
  }
  return h;
}

numerics::HermitianAction hamiltonian_action(const SpinBathConfig& cfg, const GateSegment& seg) {
  return total_hamiltonian(cfg, realize_couplings(cfg), seg).action();
}

StateVector thermal_environment(const SpinBathConfig& cfg, int sample_index) {
  cfg.validate();
  if (sample_index < 0) throw DomainError("sample_index must be >= 0");
  std::seed_seq seq{cfg.seed, kThermalStream, static_cast<std::uint64_t>(sample_index)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> g;
  StateVector v(Eigen::Index{1} << cfg.n_env);
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    const double re = g(rng);
    const double im = g(rng);
    v[k] = {re, im};
  }
  v /= v.norm();
  if (cfg.beta == 0.0) return v;
  const auto h_env = environment_hamiltonian(cfg, realize_couplings(cfg)).action();
  return numerics::imaginary_time_apply(v, h_env, 0.5 * cfg.beta, cfg.tol);
}

SpinRunResult run_circuit(const SpinBathConfig& cfg, const circuits::PhysicalCircuit& pc) {
  const Couplings couplings = realize_couplings(cfg);
  const int n_sites = kQubits + cfg.n_env;

  // Compiled actions per distinct op, in execution order.
  std::map<std::tuple<int, int, int>, std::vector<std::pair<numerics::HermitianAction, double>>> cache;
  std::vector<const std::vector<std::pair<numerics::HermitianAction, double>>*> schedule;
  for (const auto& op : pc.ops) {
    auto [it, inserted] = cache.try_emplace({static_cast<int>(op.kind), op.qubit, op.target});
    if (inserted) {
      for (const auto& seg : build_segment(op)) {
        it->second.emplace_back(total_hamiltonian(cfg, couplings, seg).action(), seg.duration);
      }
    }
    schedule.push_back(&it->second);
  }

  SpinRunResult result;
  result.dist = statevector::Distribution(pc.width());
  result.duration = circuit_duration(pc);
  const int samples = cfg.thermal_samples();
  for (int s = 0; s < samples; ++s) {
    const StateVector env = thermal_environment(cfg, s);
    StateVector psi = StateVector::Zero(Eigen::Index{1} << n_sites);
    for (Eigen::Index e = 0; e < env.size(); ++e) psi[e << kQubits] = env[e];
    for (const auto* segments : schedule) {
      for (const auto& [action, duration] : *segments) psi = numerics::chebyshev_propagate(psi, action, duration, cfg.tol);
    }
    result.max_norm_error = std::max(result.max_norm_error, std::abs(psi.norm() - 1.0));
    const auto d = statevector::marginal(psi, pc.measured_qubits);
    for (std::size_t k = 0; k < d.probs.size(); ++k) result.dist.probs[k] += d.probs[k] / samples;
  }
  return result;
}

T2Result estimate_t2(const SpinBathConfig& cfg_in, int qubit, double window, int n_samples) {
  check_qubit(qubit);
  if (!(window > 0.0) || n_samples < 8) throw DomainError("estimate_t2 needs window > 0 and >= 8 samples");
  SpinBathConfig cfg = cfg_in;
  cfg.beta = 0.0;
  const Couplings couplings = realize_couplings(cfg);
  const auto h = total_hamiltonian(cfg, couplings, GateSegment{}).action();
  const int n_sites = kQubits + cfg.n_env;

  T2Result r;
  r.times.resize(static_cast<std::size_t>(n_samples));
  r.values.assign(static_cast<std::size_t>(n_samples), 0.0);
  const double dt = window / (n_samples - 1);
  for (int j = 0; j < n_samples; ++j) r.times[static_cast<std::size_t>(j)] = j * dt;

  const int samples = cfg.thermal_samples();
  const Eigen::Index bit = Eigen::Index{1} << qubit;
  for (int s = 0; s < samples; ++s) {
    const StateVector env = thermal_environment(cfg, s);
    StateVector psi = StateVector::Zero(Eigen::Index{1} << n_sites);
    for (Eigen::Index e = 0; e < env.size(); ++e) {
      psi[e << kQubits] = env[e] / std::sqrt(2.0);
      psi[(e << kQubits) | bit] = env[e] / std::sqrt(2.0);
    }
    for (int j = 0; j < n_samples; ++j) {
      if (j > 0) psi = numerics::chebyshev_propagate(psi, h, dt, cfg.tol);
      r.values[static_cast<std::size_t>(j)] += sigma_x(psi, qubit) / samples;
    }
  }

  const auto [lo, hi] = std::minmax_element(r.values.begin(), r.values.end());
  if (*hi - *lo < 1e-9) {
    r.decay_time = std::numeric_limits<double>::infinity();
    r.fit.amplitude = 0.0;
    r.fit.decay_time = r.decay_time;
    r.fit.offset = *hi;
    return r;
  }
  r.fit = numerics::fit_damped_cosine(r.times, r.values);
  r.decay_time = r.fit.decay_time;
  return r;
}

T2Result estimate_t2_adaptive(const SpinBathConfig& cfg, int qubit, int n_samples, double initial_window) {
  if (!(initial_window > 0.0)) throw DomainError("estimate_t2 needs window > 0");
  double window = initial_window;
  std::optional<T2Result> last;
  for (int round = 0; round < 6; ++round) {
    try {
      last = estimate_t2(cfg, qubit, window, n_samples);
    } catch (const FitError&) {
      window *= 4.0;
      continue;
    }
    const double t2 = last->decay_time;
    if (!std::isfinite(t2) || (t2 >= window / 8.0 && t2 <= window / 2.0)) return *last;
    window = 4.0 * t2;
  }
  if (!last) throw FitError("no T2 window produced a fit");
  return *last;
}

}  // namespace ftlab::spinbath
