#pragma once

#include <Eigen/Core>
#include <complex>
#include <random>

namespace ccvar {

inline std::complex<double> complex_gaussian(std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  double re = normal(rng);
  double im = normal(rng);
  return {re, im};
}

inline Eigen::VectorXcd complex_gaussian_vector(int n, std::mt19937_64& rng) {
  Eigen::VectorXcd v(n);
  for (int i = 0; i < n; ++i) v[i] = complex_gaussian(rng);
  return v;
}

inline Eigen::MatrixXcd complex_gaussian_matrix(int rows, int cols, std::mt19937_64& rng) {
  Eigen::MatrixXcd m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = complex_gaussian(rng);
  return m;
}

/// Complex symmetric (not Hermitian) Gaussian matrix; the genericity the CC
/// degree counts require.
inline Eigen::MatrixXcd random_symmetric_complex(int n, std::mt19937_64& rng) {
  Eigen::MatrixXcd g = complex_gaussian_matrix(n, n, rng);
  return (g + g.transpose()) / 2;
}

inline Eigen::MatrixXd random_symmetric_real(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = normal(rng);
  return (g + g.transpose()) / 2;
}

}  // namespace ccvar
