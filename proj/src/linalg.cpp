#include "ccvar/linalg.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "ccvar/errors.hpp"

namespace ccvar {

Eigen::VectorXcd lu_solve(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  Eigen::VectorXcd x = lu.solve(b);
  x += lu.solve(b - a * x);
  return x;
}

double condition_estimate(const Eigen::PartialPivLU<Eigen::MatrixXcd>& lu, double norm1) {
  // Hager power iteration on |A^{-1}| in the 1-norm.
  const int n = static_cast<int>(lu.rows());
  if (n == 0) return 1.0;
  Eigen::VectorXcd x = Eigen::VectorXcd::Constant(n, Complex(1.0 / n, 0));
  double estimate = 0;
  for (int it = 0; it < 5; ++it) {
    Eigen::VectorXcd y = lu.solve(x);
    double norm = y.cwiseAbs().sum();
    if (norm <= estimate && it > 0) break;
    estimate = norm;
    Eigen::VectorXcd xi(n);
    for (int i = 0; i < n; ++i) {
      double m = std::abs(y[i]);
      xi[i] = m == 0 ? Complex(1, 0) : y[i] / m;
    }
    Eigen::VectorXcd z = lu.adjoint().solve(xi);
    int j = 0;
    z.cwiseAbs().maxCoeff(&j);
    x.setZero();
    x[j] = 1;
  }
  if (!std::isfinite(estimate) || estimate <= 0) return std::numeric_limits<double>::infinity();
  return estimate * norm1;
}

double condition_estimate(const Eigen::MatrixXcd& a) {
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
  return condition_estimate(lu, a.cwiseAbs().colwise().sum().maxCoeff());
}

void symmetric_eigen(const Eigen::MatrixXd& a, Eigen::VectorXd& values, Eigen::MatrixXd& vectors) {
  if (a.rows() != a.cols()) throw InvalidInput("symmetric_eigen: matrix not square");
  if (a.rows() > 1000) throw ResourceLimit("symmetric_eigen: size capped at 1000");
  double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw InvalidInput("symmetric_eigen: matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) throw NumericalFailure("symmetric_eigen: iteration failed");
  values = solver.eigenvalues();
  vectors = solver.eigenvectors();
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& a) {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  symmetric_eigen(a, values, vectors);
  return values;
}

Eigen::VectorXcd least_norm_solve(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& b) {
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(m);
  if (cod.rank() < m.rows())
    throw NumericalFailure("least_norm_solve: coefficient matrix is row rank deficient; resample");
  Eigen::VectorXcd x = cod.solve(b);
  double scale = m.cwiseAbs().maxCoeff() * x.cwiseAbs().maxCoeff() + b.cwiseAbs().maxCoeff();
  if ((m * x - b).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, scale))
    throw NumericalFailure("least_norm_solve: residual check failed");
  return x;
}

namespace {

Complex polyval(const std::vector<Complex>& coeffs, Complex z) {
  Complex v = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * z + *it;
  return v;
}

Complex polyder(const std::vector<Complex>& coeffs, Complex z) {
  Complex v = 0;
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 1; --k)
    v = v * z + static_cast<double>(k) * coeffs[k];
  return v;
}

// Parlett-Reinsch balancing with radix-2 scaling, eigenvalue-preserving.
void balance(Eigen::MatrixXcd& m) {
  const int n = static_cast<int>(m.rows());
  bool converged = false;
  while (!converged) {
    converged = true;
    for (int i = 0; i < n; ++i) {
      double r = m.row(i).cwiseAbs().sum() - std::abs(m(i, i));
      double c = m.col(i).cwiseAbs().sum() - std::abs(m(i, i));
      if (r == 0 || c == 0) continue;
      double f = 1;
      while (c < r / 2) {
        c *= 2;
        r /= 2;
        f *= 2;
      }
      while (c > r * 2) {
        c /= 2;
        r *= 2;
        f /= 2;
      }
      if (f != 1) {
        converged = false;
        m.row(i) /= f;
        m.col(i) *= f;
      }
    }
  }
}

}  // namespace

std::vector<Complex> univariate_roots(std::vector<Complex> coeffs) {
  while (!coeffs.empty() && coeffs.back() == Complex(0, 0)) coeffs.pop_back();
  if (coeffs.empty()) throw InvalidInput("univariate_roots: zero polynomial");
  int degree = static_cast<int>(coeffs.size()) - 1;
  if (degree > 300) throw ResourceLimit("univariate_roots: degree capped at 300");

  std::vector<Complex> roots;
  std::size_t zeros = 0;
  while (zeros < coeffs.size() - 1 && coeffs[zeros] == Complex(0, 0)) ++zeros;
  roots.assign(zeros, Complex(0, 0));
  std::vector<Complex> monic(coeffs.begin() + static_cast<long>(zeros), coeffs.end());
  int m = static_cast<int>(monic.size()) - 1;
  if (m == 0) return roots;
  for (auto& c : monic) c /= monic.back();

  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(m, m);
  for (int i = 1; i < m; ++i) companion(i, i - 1) = 1;
  for (int i = 0; i < m; ++i) companion(i, m - 1) = -monic[i];
  balance(companion);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw NumericalFailure("univariate_roots: eigensolver failed");

  for (int i = 0; i < m; ++i) {
    Complex r = solver.eigenvalues()[i];
    for (int it = 0; it < 3; ++it) {
      Complex p = polyval(monic, r), dp = polyder(monic, r);
      if (dp == Complex(0, 0)) break;
      Complex step = p / dp;
      if (!std::isfinite(std::abs(step))) break;
      if (std::abs(polyval(monic, r - step)) < std::abs(p)) r -= step;
      else break;
    }
    roots.push_back(r);
  }
  return roots;
}

Eigen::VectorXcd signed_maximal_minors(const Eigen::MatrixXcd& m) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  if (cols != rows + 1) throw InvalidInput("signed_maximal_minors: need cols = rows + 1");
  Eigen::VectorXcd v(cols);
  Eigen::MatrixXcd sub(rows, rows);
  for (int skip = 0; skip < cols; ++skip) {
    for (int j = 0, t = 0; j < cols; ++j) {
      if (j == skip) continue;
      sub.col(t++) = m.col(j);
    }
    Complex det = rows == 0 ? Complex(1, 0) : Eigen::PartialPivLU<Eigen::MatrixXcd>(sub).determinant();
    v[skip] = (skip % 2 == 0 ? 1.0 : -1.0) * det;
  }
  return v;
}

}  // namespace ccvar
