#pragma once

#include <cstdint>
#include <vector>

#include "ftlab/numerics/chebyshev.hpp"

namespace ftlab::spinbath {

/// Real linear combination of Pauli strings on up to 63 spins, applied
/// matrix-free. A string is given by bit masks: site s carries X if only
/// x_mask has bit s, Z if only z_mask has it, Y if both do. Basis index bit s
/// is spin s (0 = up).
class PauliSum {
 public:
  explicit PauliSum(int n_sites);

  void add(double coeff, std::uint64_t x_mask, std::uint64_t z_mask);
  /// coeff * sigma^a_site, a in {'x','y','z'}.
  void add_single(double coeff, char axis, int site);
  /// coeff * sigma^a_i sigma^a_j.
  void add_pair(double coeff, char axis, int i, int j);
  void append(const PauliSum& other);

  int n_sites() const { return n_sites_; }
  Eigen::Index dim() const { return Eigen::Index{1} << n_sites_; }
  /// Sum of |coefficients|; bounds the spectral radius.
  double l1_norm() const;

  void apply(const numerics::StateVector& in, numerics::StateVector& out) const;

  /// Matrix-free action with bounds +-l1_norm(). The returned action keeps a
  /// compiled copy of the terms.
  numerics::HermitianAction action() const;

 private:
  struct Term {
    double coeff;
    std::uint64_t x_mask;
    std::uint64_t z_mask;
  };
  int n_sites_;
  std::vector<Term> terms_;
};

}  // namespace ftlab::spinbath
