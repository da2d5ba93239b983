#include "ftlab/transmon/model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "ftlab/error.hpp"
#include "ftlab/statevector/simulator.hpp"

namespace ftlab::transmon {
namespace {

using cd = std::complex<double>;
using circuits::OpKind;
using circuits::PhysicalOp;
using std::numbers::pi;

constexpr Eigen::Index kDressedDimLimit = 1024;

// Basis indices whose digits at the given sites are all zero.
std::vector<Eigen::Index> bases_without(const TransmonModel& m, std::initializer_list<int> sites) {
  std::vector<Eigen::Index> out;
  for (Eigen::Index k = 0; k < m.dim(); ++k) {
    bool zero = true;
    for (int s : sites) zero = zero && m.level(k, s) == 0;
    if (zero) out.push_back(k);
  }
  return out;
}

// exp(-i t H) for a small real symmetric H.
Eigen::MatrixXcd exp_symmetric(const Eigen::MatrixXd& h, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  const Eigen::MatrixXcd v = es.eigenvectors().cast<cd>();
  Eigen::VectorXcd phases(h.rows());
  for (Eigen::Index i = 0; i < h.rows(); ++i) phases[i] = std::polar(1.0, -t * es.eigenvalues()[i]);
  return v * phases.asDiagonal() * v.adjoint();
}

// Applies a factor acting on the local digits at the given strides.
struct LocalFactor {
  std::vector<Eigen::Index> bases;
  std::vector<Eigen::Index> offsets;
  Eigen::MatrixXcd matrix;

  void apply(Eigen::MatrixXcd& states) const {
    const auto n = static_cast<Eigen::Index>(offsets.size());
    Eigen::VectorXcd in(n), out(n);
    for (Eigen::Index col = 0; col < states.cols(); ++col) {
      cd* v = states.col(col).data();
      for (Eigen::Index base : bases) {
        for (Eigen::Index i = 0; i < n; ++i) in[i] = v[base + offsets[i]];
        out.noalias() = matrix * in;
        for (Eigen::Index i = 0; i < n; ++i) v[base + offsets[i]] = out[i];
      }
    }
  }
};

Eigen::MatrixXd annihilation() {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(kLevels, kLevels);
  for (int k = 1; k < kLevels; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  return a;
}

// Local coupling operator G n (a + a^dag) with index la + 4 lb.
Eigen::MatrixXd coupling_operator(const TransmonLevels& lv, double g) {
  const Eigen::MatrixXd a = annihilation();
  const Eigen::MatrixXd x = a + a.transpose();
  Eigen::MatrixXd h(kLevels * kLevels, kLevels * kLevels);
  for (int la = 0; la < kLevels; ++la) {
    for (int lb = 0; lb < kLevels; ++lb) {
      for (int ma = 0; ma < kLevels; ++ma) {
        for (int mb = 0; mb < kLevels; ++mb) h(la + kLevels * lb, ma + kLevels * mb) = g * lv.n_matrix(la, ma) * x(lb, mb);
      }
    }
  }
  return h;
}

std::vector<int> op_qubits(const PhysicalOp& op) {
  std::vector<int> q{op.qubit};
  if (op.kind == OpKind::CNOT) q.push_back(op.target);
  std::sort(q.begin(), q.end());
  return q;
}

void require_sites(const TransmonModel& model, const std::vector<int>& qubits) {
  for (int q : qubits) {
    if (model.site_of(q) < 0) {
      throw ConfigError("subsystem " + model.subsystem().name() + " does not contain q" + std::to_string(q));
    }
  }
}

}  // namespace

TransmonModel::TransmonModel(const TransmonDevice& device, Subsystem subsystem, int n_charge_max)
    : device_(device), subsystem_(std::move(subsystem)) {
  device_.validate();
  const int n = sites();
  strides_.resize(n);
  for (int s = 0; s < n; ++s) {
    strides_[s] = dim_;
    dim_ *= kLevels;
  }
  for (int q : subsystem_.transmons) {
    levels_.push_back(transmon_eigensystem(device_.e_c_rad(q), device_.e_j_rad(q), n_charge_max, kLevels));
  }

  diagonal_ = Eigen::VectorXd::Zero(dim_);
  for (Eigen::Index k = 0; k < dim_; ++k) {
    double e = 0.0;
    for (std::size_t i = 0; i < subsystem_.transmons.size(); ++i) e += levels_[i].energies[level(k, static_cast<int>(i))];
    for (std::size_t r = 0; r < subsystem_.resonators.size(); ++r) {
      const int site = static_cast<int>(subsystem_.transmons.size() + r);
      e += kTwoPi * device_.omega[subsystem_.resonators[r]] * level(k, site);
    }
    diagonal_[k] = e;
  }

  for (std::size_t r = 0; r < subsystem_.resonators.size(); ++r) {
    const int res = subsystem_.resonators[r];
    const auto [a, b] = device_.coupled[res];
    for (std::size_t i = 0; i < subsystem_.transmons.size(); ++i) {
      const int q = subsystem_.transmons[i];
      if (q == a || q == b) {
        couplings_.push_back({static_cast<int>(i), static_cast<int>(subsystem_.transmons.size() + r),
                              kTwoPi * device_.g[res]});
      }
    }
  }

  const bool full = subsystem_.transmons.size() == kTransmons && subsystem_.resonators.size() == kResonators;
  for (int q : subsystem_.transmons) frame_freq_[q] = device_.qubit_freq[q];
  if (!full && dim_ <= kDressedDimLimit) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense_hamiltonian());
    if (es.info() != Eigen::Success) throw NumericError("static Hamiltonian diagonalisation failed");
    auto dressed_energy = [&](Eigen::Index bare) {
      Eigen::Index best = 0;
      es.eigenvectors().row(bare).cwiseAbs2().maxCoeff(&best);
      return es.eigenvalues()[best];
    };
    const double e0 = dressed_energy(0);
    for (std::size_t i = 0; i < subsystem_.transmons.size(); ++i) {
      frame_freq_[subsystem_.transmons[i]] = (dressed_energy(strides_[i]) - e0) / kTwoPi;
    }
  }
}

int TransmonModel::site_of(int qubit) const {
  const auto it = std::find(subsystem_.transmons.begin(), subsystem_.transmons.end(), qubit);
  return it == subsystem_.transmons.end() ? -1 : static_cast<int>(it - subsystem_.transmons.begin());
}

Eigen::Index TransmonModel::index_of(const std::vector<int>& site_levels) const {
  if (static_cast<int>(site_levels.size()) != sites()) throw ConfigError("one level per site required");
  Eigen::Index k = 0;
  for (int s = 0; s < sites(); ++s) k += site_levels[s] * strides_[s];
  return k;
}

double TransmonModel::qubit_frequency(int qubit) const {
  if (site_of(qubit) < 0) throw ConfigError("q" + std::to_string(qubit) + " is not simulated");
  return frame_freq_[qubit];
}

Eigen::MatrixXcd TransmonModel::dense_hamiltonian(const std::vector<double>& n_g) const {
  if (dim_ > 4096) throw ConfigError("dense Hamiltonian limited to dimension 4096");
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim_, dim_);
  h.diagonal() = diagonal_.cast<cd>();
  const Eigen::MatrixXd x = annihilation() + annihilation().transpose();
  for (Eigen::Index k = 0; k < dim_; ++k) {
    for (const auto& c : couplings_) {
      const int la = level(k, c.transmon_site);
      const int lb = level(k, c.resonator_site);
      for (int ma = 0; ma < kLevels; ++ma) {
        for (int mb = 0; mb < kLevels; ++mb) {
          const double v = c.g * levels_[c.transmon_site].n_matrix(ma, la) * x(mb, lb);
          if (v == 0.0) continue;
          const Eigen::Index j = k + (ma - la) * strides_[c.transmon_site] + (mb - lb) * strides_[c.resonator_site];
          h(j, k) += v;
        }
      }
    }
    for (std::size_t i = 0; i < n_g.size() && i < subsystem_.transmons.size(); ++i) {
      if (n_g[i] == 0.0) continue;
      const int s = static_cast<int>(i);
      const double scale = -8.0 * device_.e_c_rad(subsystem_.transmons[i]) * n_g[i];
      const int la = level(k, s);
      for (int ma = 0; ma < kLevels; ++ma) h(k + (ma - la) * strides_[s], k) += scale * levels_[i].n_matrix(ma, la);
    }
  }
  return h;
}

void trotter_evolve(const TransmonModel& model, Eigen::MatrixXcd& states, const DriveFunction& drive, double t_begin,
                    double t_end, double tau) {
  if (states.rows() != model.dim()) throw ConfigError("state dimension does not match the model");
  if (!(tau > 0.0) || !std::isfinite(t_begin) || !std::isfinite(t_end)) throw DomainError("bad time step or span");
  const double span = t_end - t_begin;
  if (span < 0.0) throw DomainError("negative time span");
  if (span == 0.0) return;
  const auto steps = std::max<long long>(1, std::llround(span / tau));
  const double dt = span / static_cast<double>(steps);

  const auto& diag = model.diagonal();
  Eigen::VectorXcd half(model.dim()), whole(model.dim());
  for (Eigen::Index k = 0; k < model.dim(); ++k) {
    half[k] = std::polar(1.0, -0.5 * dt * diag[k]);
    whole[k] = std::polar(1.0, -dt * diag[k]);
  }

  std::vector<LocalFactor> couplings;
  for (const auto& c : model.couplings()) {
    LocalFactor f;
    f.bases = bases_without(model, {c.transmon_site, c.resonator_site});
    for (int lb = 0; lb < kLevels; ++lb) {
      for (int la = 0; la < kLevels; ++la) {
        f.offsets.push_back(la * model.stride(c.transmon_site) + lb * model.stride(c.resonator_site));
      }
    }
    const int q = model.subsystem().transmons[c.transmon_site];
    f.matrix = exp_symmetric(coupling_operator(model.levels(q), c.g), 0.5 * dt);
    couplings.push_back(std::move(f));
  }

  const int n_tr = static_cast<int>(model.subsystem().transmons.size());
  std::vector<LocalFactor> drives(n_tr);
  std::vector<Eigen::MatrixXd> n_vecs(n_tr);
  std::vector<Eigen::VectorXd> n_vals(n_tr);
  std::vector<double> e_c(n_tr);
  for (int s = 0; s < n_tr; ++s) {
    const int q = model.subsystem().transmons[s];
    drives[s].bases = bases_without(model, {s});
    for (int la = 0; la < kLevels; ++la) drives[s].offsets.push_back(la * model.stride(s));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(model.levels(q).n_matrix);
    n_vecs[s] = es.eigenvectors();
    n_vals[s] = es.eigenvalues();
    e_c[s] = model.device().e_c_rad(q);
  }

  std::vector<double> n_g(n_tr, 0.0);
  states = half.asDiagonal() * states;
  for (long long step = 0; step < steps; ++step) {
    for (const auto& f : couplings) f.apply(states);
    std::fill(n_g.begin(), n_g.end(), 0.0);
    drive(t_begin + (static_cast<double>(step) + 0.5) * dt, n_g);
    for (int s = 0; s < n_tr; ++s) {
      if (n_g[s] == 0.0) continue;
      // exp(-i dt (-8 E_C n_g n)) in the eigenbasis of n
      Eigen::VectorXcd phases(kLevels);
      for (int i = 0; i < kLevels; ++i) phases[i] = std::polar(1.0, 8.0 * e_c[s] * n_g[s] * dt * n_vals[s][i]);
      drives[s].matrix = n_vecs[s].cast<cd>() * phases.asDiagonal() * n_vecs[s].transpose().cast<cd>();
      drives[s].apply(states);
    }
    for (auto it = couplings.rbegin(); it != couplings.rend(); ++it) it->apply(states);
    states = (step + 1 == steps ? half : whole).asDiagonal() * states;
  }
}

Schedule compile_op(const PhysicalOp& op, const PulseLibrary& lib) {
  circuits::PhysicalCircuit pc;
  pc.ops = {op};
  return compile_to_pulses(pc, lib);
}

Schedule compile_to_pulses(const circuits::PhysicalCircuit& pc, const PulseLibrary& lib) {
  Schedule s;
  auto place = [&](int qubit, const Pulse& p) {
    s.pulses.push_back({qubit, p, s.duration});
    s.duration += p.duration;
  };
  auto xpih = [&](int q) -> const XpihParams& {
    const auto it = lib.xpih.find(q);
    if (it == lib.xpih.end()) throw CompileError("no xpih pulse for q" + std::to_string(q) + " in set " + lib.set);
    return it->second;
  };
  for (const auto& op : pc.ops) {
    const int q = op.qubit;
    switch (op.kind) {
      case OpKind::X:
        place(q, xpih_pulse(xpih(q), s.frame[q]));
        place(q, xpih_pulse(xpih(q), s.frame[q]));
        break;
      case OpKind::H:
        s.frame[q] += pi / 2;
        place(q, xpih_pulse(xpih(q), s.frame[q]));
        s.frame[q] += pi / 2;
        break;
      case OpKind::Z: s.frame[q] += pi; break;
      case OpKind::S: s.frame[q] -= pi / 2; break;
      case OpKind::CNOT: {
        const int c = op.qubit;
        const int t = op.target;
        const auto it = lib.cnot.find({c, t});
        if (it == lib.cnot.end()) {
          throw CompileError("no cross-resonance pulse for CNOT(" + std::to_string(c) + "," + std::to_string(t) +
                             ") in set " + lib.set);
        }
        const CnotParams& p = it->second;
        const double sign = p.f_c > p.f_t ? 1.0 : -1.0;
        const Pulse pi_c = Pulse::gaussian(p.omega_c, p.t_x, p.f_c, p.beta_c, s.frame[c]);
        place(c, Pulse::flat_top(sign * p.omega_cr, p.t_cr, p.f_t, s.frame[t]));
        place(c, pi_c);
        place(c, Pulse::flat_top(-sign * p.omega_cr, p.t_cr, p.f_t, s.frame[t]));
        place(c, pi_c);
        place(t, Pulse::gaussian(p.omega_t, p.t_x, p.f_t, p.beta_t, s.frame[t] + pi));
        s.frame[c] -= pi / 2;
        break;
      }
    }
  }
  return s;
}

void run_schedule(const TransmonModel& model, const Schedule& schedule, Eigen::MatrixXcd& states, double tau) {
  for (const auto& sp : schedule.pulses) {
    const int site = model.site_of(sp.qubit);
    if (site < 0) throw ConfigError("pulse on q" + std::to_string(sp.qubit) + " outside the simulated subsystem");
    sp.pulse.validate();
    const auto drive = [&](double t, std::vector<double>& n_g) {
      n_g[site] = pulse_waveform(sp.pulse, t - sp.start, sp.start);
    };
    trotter_evolve(model, states, drive, sp.start, sp.start + sp.pulse.duration, tau);
  }
}

TransmonRunResult run_circuit(const TransmonModel& model, const PulseLibrary& lib, const circuits::PhysicalCircuit& pc,
                              double tau) {
  std::vector<int> used(pc.measured_qubits.begin(), pc.measured_qubits.end());
  for (const auto& op : pc.ops) {
    for (int q : op_qubits(op)) used.push_back(q);
  }
  require_sites(model, used);

  const Schedule schedule = compile_to_pulses(pc, lib);
  Eigen::MatrixXcd state = Eigen::MatrixXcd::Zero(model.dim(), 1);
  state(0, 0) = 1.0;
  run_schedule(model, schedule, state, tau);

  const int n_tr = static_cast<int>(model.subsystem().transmons.size());
  std::vector<int> measured_sites;
  for (int q : pc.measured_qubits) measured_sites.push_back(model.site_of(q));

  TransmonRunResult out;
  out.duration = schedule.duration;
  out.dist = statevector::Distribution(static_cast<int>(measured_sites.size()));
  for (Eigen::Index k = 0; k < model.dim(); ++k) {
    const double p = std::norm(state(k, 0));
    bool leaked = false;
    for (int s = 0; s < n_tr; ++s) leaked = leaked || model.level(k, s) >= 2;
    if (leaked) {
      out.leakage += p;
      continue;
    }
    unsigned code = 0;
    for (std::size_t i = 0; i < measured_sites.size(); ++i) code |= static_cast<unsigned>(model.level(k, measured_sites[i])) << i;
    out.dist.probs[code] += p;
  }
  const double kept = out.dist.total();
  if (!(kept > 0.0)) throw NumericError("all probability leaked out of the computational subspace");
  for (double& p : out.dist.probs) p /= kept;
  return out;
}

Eigen::MatrixXcd gate_matrix(const TransmonModel& model, const Schedule& schedule, const std::vector<int>& qubits,
                             double tau) {
  require_sites(model, qubits);
  const auto d = Eigen::Index{1} << qubits.size();
  std::vector<Eigen::Index> index(d);
  for (Eigen::Index b = 0; b < d; ++b) {
    Eigen::Index k = 0;
    for (std::size_t i = 0; i < qubits.size(); ++i) {
      if (b >> i & 1) k += model.stride(model.site_of(qubits[i]));
    }
    index[b] = k;
  }
  Eigen::MatrixXcd states = Eigen::MatrixXcd::Zero(model.dim(), d);
  for (Eigen::Index b = 0; b < d; ++b) states(index[b], b) = 1.0;
  run_schedule(model, schedule, states, tau);

  Eigen::MatrixXcd m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    double phase = 0.0;
    for (std::size_t i = 0; i < qubits.size(); ++i) {
      if (r >> i & 1) {
        phase += kTwoPi * model.qubit_frequency(qubits[i]) * schedule.duration - schedule.frame[qubits[i]];
      }
    }
    m.row(r) = std::polar(1.0, phase) * states.row(index[r]);
  }
  return m;
}

Eigen::MatrixXcd gate_matrix(const TransmonModel& model, const PulseLibrary& lib, const PhysicalOp& op, double tau) {
  return gate_matrix(model, compile_op(op, lib), op_qubits(op), tau);
}

Eigen::MatrixXcd target_unitary(const PhysicalOp& op) {
  if (op.kind != OpKind::CNOT) return statevector::single_qubit_matrix(op.kind);
  const int control_bit = op.qubit < op.target ? 0 : 1;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(4, 4);
  for (int k = 0; k < 4; ++k) u((k >> control_bit & 1) ? k ^ (1 << (1 - control_bit)) : k, k) = 1.0;
  return u;
}

Eigen::Matrix2cd xpih_target() {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd u;
  u << r, cd(0, r), cd(0, r), r;
  return u;
}

GateMetrics gate_metrics(const Eigen::MatrixXcd& m, const Eigen::MatrixXcd& target) {
  if (m.rows() != m.cols() || target.rows() != target.cols() || m.rows() != target.rows()) {
    throw ConfigError("gate matrix and target must be square of equal size");
  }
  const auto d = static_cast<double>(m.rows());
  const double norm2 = m.squaredNorm();
  const double overlap = std::abs((target.adjoint() * m).trace());
  GateMetrics g;
  g.delta = std::max(0.0, (norm2 + d - 2.0 * overlap) / (2.0 * d));
  g.f_avg = (norm2 + overlap * overlap) / (d * (d + 1.0));

  if (m.rows() != 2 && m.rows() != 4) throw ConfigError("unitarity needs a one- or two-qubit matrix");
  std::array<Eigen::Matrix2cd, 4> p1;
  p1[0] << 1, 0, 0, 1;
  p1[1] << 0, 1, 1, 0;
  p1[2] << 0, cd(0, -1), cd(0, 1), 0;
  p1[3] << 1, 0, 0, -1;
  std::vector<Eigen::MatrixXcd> paulis;
  if (m.rows() == 2) {
    for (const auto& p : p1) paulis.emplace_back(p);
  } else {
    for (const auto& hi : p1) {
      for (const auto& lo : p1) {
        Eigen::MatrixXcd k(4, 4);
        for (int r = 0; r < 4; ++r) {
          for (int c = 0; c < 4; ++c) k(r, c) = hi(r >> 1, c >> 1) * lo(r & 1, c & 1);
        }
        paulis.push_back(k);
      }
    }
  }
  double sum = 0.0;
  for (std::size_t j = 1; j < paulis.size(); ++j) {
    const Eigen::MatrixXcd image = m * paulis[j] * m.adjoint();
    for (std::size_t i = 1; i < paulis.size(); ++i) {
      const double r = (paulis[i] * image).trace().real() / d;
      sum += r * r;
    }
  }
  g.unitarity = sum / (d * d - 1.0);
  return g;
}

numerics::NelderMeadOptions pulse_optimizer_options() {
  numerics::NelderMeadOptions o;
  o.max_iters = 150;
  o.tol_f = 1e-9;
  o.tol_x = 1e-4;
  return o;
}

PulseLibrary retarget_library(const PulseLibrary& lib, const TransmonModel& model) {
  PulseLibrary out = lib;
  for (auto& [q, p] : out.xpih) {
    if (model.site_of(q) >= 0) p.f = model.qubit_frequency(q);
  }
  for (auto& [key, p] : out.cnot) {
    if (model.site_of(p.control) >= 0) p.f_c = model.qubit_frequency(p.control);
    if (model.site_of(p.target) >= 0) p.f_t = model.qubit_frequency(p.target);
  }
  return out;
}

namespace {

template <class Result>
void track_history(numerics::NelderMeadOptions& options, Result& result) {
  auto user = options.on_iteration;
  options.on_iteration = [&result, user](int it, double f) {
    result.history.push_back(f);
    if (user) user(it, f);
  };
}

}  // namespace

XpihOptimization optimize_xpih(const TransmonModel& model, const XpihParams& initial, bool tune_freq, double tau,
                               numerics::NelderMeadOptions options) {
  if (!(initial.omega_x > 0.0)) throw DomainError("initial amplitude must be positive");
  require_sites(model, {initial.qubit});
  const Eigen::MatrixXcd target = xpih_target();
  auto params_of = [&](std::span<const double> x) {
    XpihParams p = initial;
    p.omega_x = initial.omega_x * x[0];
    p.beta_x = x[1];
    if (tune_freq) p.f = initial.f + 1e-3 * x[2];
    return p;
  };
  auto metrics_of = [&](const XpihParams& p) {
    Schedule s;
    s.pulses.push_back({p.qubit, xpih_pulse(p), 0.0});
    s.duration = p.t_x;
    return gate_metrics(gate_matrix(model, s, {p.qubit}, tau), target);
  };

  XpihOptimization out;
  out.initial = initial;
  out.initial_metrics = metrics_of(initial);
  std::vector<double> x0{1.0, initial.beta_x};
  if (tune_freq) x0.push_back(0.0);
  if (options.initial_steps.empty()) {
    options.initial_steps = {0.05, 0.5};
    if (tune_freq) options.initial_steps.push_back(0.5);  // MHz
  }
  track_history(options, out);
  const auto r = numerics::nelder_mead(
      [&](std::span<const double> x) {
        if (!(x[0] > 0.0)) return std::numeric_limits<double>::infinity();
        return metrics_of(params_of(x)).delta;
      },
      x0, options);
  out.best = params_of(r.x_best);
  out.best_metrics = metrics_of(out.best);
  out.evaluations = r.evaluations;
  return out;
}

CnotOptimization optimize_cnot(const TransmonModel& model, const PulseLibrary& lib, const CnotParams& initial,
                               bool tune_freq, double tau, numerics::NelderMeadOptions options) {
  if (!(initial.omega_cr > 0.0) || !(initial.omega_c > 0.0) || !(initial.t_cr > 0.0)) {
    throw DomainError("initial CNOT amplitudes and flat-top length must be positive");
  }
  const PhysicalOp op = PhysicalOp::cnot(initial.control, initial.target);
  require_sites(model, op_qubits(op));
  const Eigen::MatrixXcd target = target_unitary(op);
  auto params_of = [&](std::span<const double> x) {
    CnotParams p = initial;
    p.omega_cr = initial.omega_cr * x[0];
    p.t_cr = x[1];
    p.omega_c = initial.omega_c * x[2];
    p.beta_c = x[3];
    if (tune_freq) p.f_t = initial.f_t + 1e-3 * x[4];
    return p;
  };
  auto metrics_of = [&](const CnotParams& p) {
    PulseLibrary trial = lib;
    trial.cnot[{p.control, p.target}] = p;
    return gate_metrics(gate_matrix(model, trial, op, tau), target);
  };

  CnotOptimization out;
  out.initial = initial;
  out.initial_metrics = metrics_of(initial);
  std::vector<double> x0{1.0, initial.t_cr, 1.0, initial.beta_c};
  if (tune_freq) x0.push_back(0.0);
  if (options.initial_steps.empty()) {
    options.initial_steps = {0.05, 2.0, 0.02, 0.3};
    if (tune_freq) options.initial_steps.push_back(0.5);
  }
  track_history(options, out);
  const auto r = numerics::nelder_mead(
      [&](std::span<const double> x) {
        if (!(x[0] > 0.0) || !(x[1] > 0.0) || !(x[2] > 0.0)) return std::numeric_limits<double>::infinity();
        return metrics_of(params_of(x)).delta;
      },
      x0, options);
  out.best = params_of(r.x_best);
  out.best_metrics = metrics_of(out.best);
  out.evaluations = r.evaluations;
  return out;
}

}  // namespace ftlab::transmon
