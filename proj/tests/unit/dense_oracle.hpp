#pragma once

// Dense reference constructions used as independent oracles in tests.

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <unsupported/Eigen/KroneckerProduct>

namespace ftlab::testing {

using cd = std::complex<double>;
using Mat = Eigen::MatrixXcd;

inline Mat pauli(char which) {
  Mat m(2, 2);
  switch (which) {
    case 'x': m << 0, 1, 1, 0; break;
    case 'y': m << 0, cd(0, -1), cd(0, 1), 0; break;
    case 'z': m << 1, 0, 0, -1; break;
    default: m << 1, 0, 0, 1; break;
  }
  return m;
}

// Operator acting on `site` of an n-site register, basis index bit s = site s.
inline Mat embed(const Mat& op, int site, int n_sites, int local_dim = 2) {
  const auto below = static_cast<Eigen::Index>(std::pow(local_dim, site));
  const auto above = static_cast<Eigen::Index>(std::pow(local_dim, n_sites - site - 1));
  Mat left = Eigen::kroneckerProduct(Mat::Identity(above, above), op).eval();
  return Eigen::kroneckerProduct(left, Mat::Identity(below, below)).eval();
}

inline Mat site_pauli(char which, int site, int n_sites) { return embed(pauli(which), site, n_sites); }

// exp(-i t H) for Hermitian H by eigendecomposition.
inline Mat dense_propagator(const Mat& h, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Eigen::VectorXcd phases = (es.eigenvalues().cast<cd>() * cd(0, -t)).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

// exp(-tau H) for Hermitian H.
inline Mat dense_imaginary(const Mat& h, double tau) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  const double e0 = es.eigenvalues().minCoeff();
  Eigen::VectorXcd w = ((es.eigenvalues().array() - e0) * -tau).exp().cast<cd>();
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

inline Eigen::VectorXcd random_state(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = cd(g(rng), g(rng));
  return v / v.norm();
}

}  // namespace ftlab::testing
