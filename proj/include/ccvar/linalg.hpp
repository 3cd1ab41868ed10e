#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <complex>
#include <vector>

namespace ccvar {

using Complex = std::complex<double>;

/// Solve A x = b by partial-pivoted LU with one step of iterative refinement.
Eigen::VectorXcd lu_solve(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b);

/// Hager-style 1-norm condition estimate from an existing factorization.
double condition_estimate(const Eigen::PartialPivLU<Eigen::MatrixXcd>& lu, double norm1);
double condition_estimate(const Eigen::MatrixXcd& a);

/// Eigendecomposition of a real symmetric matrix: eigenvalues ascending,
/// eigenvectors orthonormal in columns. Non-symmetric input is a contract
/// error; size capped at 1000.
void symmetric_eigen(const Eigen::MatrixXd& a, Eigen::VectorXd& values, Eigen::MatrixXd& vectors);
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& a);

/// Minimum-norm solution of the underdetermined full-row-rank system M x = b.
/// Rank deficiency raises NumericalFailure (callers resample).
Eigen::VectorXcd least_norm_solve(const Eigen::MatrixXcd& m, const Eigen::VectorXcd& b);

/// All complex roots of sum_k coeffs[k] lambda^k via the balanced companion
/// matrix, each polished by one Newton step. Exact trailing zero coefficients
/// are stripped; zero polynomial is an error; degree capped at 300.
std::vector<Complex> univariate_roots(std::vector<Complex> coeffs);

/// For M with one more column than rows, the kernel vector v with
/// v_i = (-1)^i det(M with column i deleted); satisfies M v = 0.
Eigen::VectorXcd signed_maximal_minors(const Eigen::MatrixXcd& m);

}  // namespace ccvar
