#include "ftlab/spinbath/pauli_sum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>

#include "ftlab/error.hpp"

namespace ftlab::spinbath {
namespace {

using numerics::StateVector;

// Terms sharing an x mask, with the phase i^{#Y} folded into a real
// coefficient (the sum is Hermitian only if every #Y is even).
struct Group {
  std::uint64_t x_mask;
  std::vector<std::pair<double, std::uint64_t>> terms;  // (coeff, z_mask)
};

struct Compiled {
  std::vector<double> diagonal;
  std::vector<Group> groups;

  void apply(const StateVector& in, StateVector& out) const {
    const auto dim = static_cast<std::size_t>(in.size());
    for (std::size_t k = 0; k < dim; ++k) out[static_cast<Eigen::Index>(k)] = diagonal[k] * in[static_cast<Eigen::Index>(k)];
    for (const auto& g : groups) {
      for (std::size_t k = 0; k < dim; ++k) {
        double c = 0.0;
        for (const auto& [coeff, z] : g.terms) c += (std::popcount(k & z) & 1) ? -coeff : coeff;
        out[static_cast<Eigen::Index>(k ^ g.x_mask)] += c * in[static_cast<Eigen::Index>(k)];
      }
    }
  }
};

std::uint64_t site_bit(int site, int n_sites) {
  if (site < 0 || site >= n_sites) throw DomainError("Pauli site index out of range");
  return std::uint64_t{1} << site;
}

}  // namespace

PauliSum::PauliSum(int n_sites) : n_sites_(n_sites) {
  if (n_sites < 1 || n_sites > 40) throw ConfigError("PauliSum supports 1..40 sites");
}

void PauliSum::add(double coeff, std::uint64_t x_mask, std::uint64_t z_mask) {
  const std::uint64_t all = (std::uint64_t{1} << n_sites_) - 1;
  if ((x_mask | z_mask) & ~all) throw DomainError("Pauli mask exceeds register");
  if (coeff != 0.0) terms_.push_back({coeff, x_mask, z_mask});
}

void PauliSum::add_single(double coeff, char axis, int site) { add_pair(coeff, axis, site, -1); }

void PauliSum::add_pair(double coeff, char axis, int i, int j) {
  std::uint64_t m = site_bit(i, n_sites_);
  if (j >= 0) {
    if (j == i) throw DomainError("Pauli pair needs distinct sites");
    m |= site_bit(j, n_sites_);
  }
  switch (axis) {
    case 'x': add(coeff, m, 0); break;
    case 'y': add(coeff, m, m); break;
    case 'z': add(coeff, 0, m); break;
    default: throw DomainError("Pauli axis must be x, y or z");
  }
}

void PauliSum::append(const PauliSum& other) {
  if (other.n_sites_ != n_sites_) throw ConfigError("PauliSum register sizes differ");
  terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
}

double PauliSum::l1_norm() const {
  double s = 0.0;
  for (const auto& t : terms_) s += std::abs(t.coeff);
  return s;
}

numerics::HermitianAction PauliSum::action() const {
  auto compiled = std::make_shared<Compiled>();
  const auto dim = static_cast<std::size_t>(this->dim());
  compiled->diagonal.assign(dim, 0.0);
  std::map<std::uint64_t, Group> by_x;
  for (const auto& t : terms_) {
    // P|k> = i^{#Y} (-1)^{popcount(k & z)} |k ^ x>, with #Y = popcount(x & z).
    const int n_y = std::popcount(t.x_mask & t.z_mask);
    if (n_y % 2 != 0) throw ConfigError("Pauli strings with an odd number of Y factors are not supported");
    const double c = (n_y % 4 == 2) ? -t.coeff : t.coeff;
    if (t.x_mask == 0) {
      for (std::size_t k = 0; k < dim; ++k) compiled->diagonal[k] += (std::popcount(k & t.z_mask) & 1) ? -c : c;
    } else {
      auto& g = by_x[t.x_mask];
      g.x_mask = t.x_mask;
      g.terms.emplace_back(c, t.z_mask);
    }
  }
  for (auto& [x, g] : by_x) compiled->groups.push_back(std::move(g));

  numerics::HermitianAction a;
  a.dim = this->dim();
  // The zero operator still needs a non-empty interval for the rescaling.
  const double bound = terms_.empty() ? 1.0 : l1_norm();
  a.bound_lo = -bound;
  a.bound_hi = bound;
  a.apply = [compiled](const StateVector& in, StateVector& out) { compiled->apply(in, out); };
  return a;
}

void PauliSum::apply(const numerics::StateVector& in, numerics::StateVector& out) const {
  action().apply(in, out);
}

}  // namespace ftlab::spinbath
