#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <vector>

#include "ccvar/indexing.hpp"
#include "ccvar/ubp.hpp"

namespace ccvar {

/// Nonzero pattern of the cluster-operator matrix T(x) on one (d, n) grid:
/// entry (row J, col I) is sign * x_K with K = ([d] \ (I\J)) cup (J\I),
/// present exactly when I\J is a subset of [d], (J\I) cap [d] is empty and
/// J != I. The matrix is strictly lower triangular in the global order and
/// T(x)^{d+1} = 0 for every x.
class ExcitationStructure {
 public:
  struct Entry {
    std::int32_t row;
    std::int32_t col;
    std::int32_t var;  // global index of the amplitude in the entry
    double sign;       // +-1
  };

  explicit ExcitationStructure(const IndexTable& table);

  const IndexTable& table() const { return *table_; }
  int dim() const { return table_->size(); }
  const std::vector<Entry>& entries() const { return entries_; }

  /// Linear sign eps_I of the coordinate I: the sign of the (I, [d]) entry of
  /// T(x). The single source of truth for all replicate/backward signs.
  int epsilon(int index) const { return eps_[index]; }

  /// y += T(x) v
  void apply(const Eigen::VectorXcd& x, const Eigen::VectorXcd& v, Eigen::VectorXcd& y) const;
  /// y += T(x)^T v
  void apply_transposed(const Eigen::VectorXcd& x, const Eigen::VectorXcd& v, Eigen::VectorXcd& y) const;
  /// y += X_var v  (unit amplitude on a single coordinate)
  void apply_single(int var, const Eigen::VectorXcd& v, Eigen::VectorXcd& y) const;

  Eigen::SparseMatrix<Complex> matrix(const Eigen::VectorXcd& x) const;

 private:
  const IndexTable* table_;
  std::vector<Entry> entries_;                    // grouped by var
  std::vector<std::pair<int, int>> var_range_;    // per var: [begin, end) in entries_
  std::vector<int> eps_;
};

/// exp(T(x)) v via the finite sum of d+1 sparse applications; never
/// materializes the exponential.
Eigen::VectorXcd apply_exp(const ExcitationStructure& s, const Eigen::VectorXcd& x,
                           const Eigen::VectorXcd& v);

/// Dense exp(T(x)) = sum_{k<=d} T(x)^k / k!; exact finite sum, unit diagonal.
Eigen::MatrixXcd exp_matrix(const ExcitationStructure& s, const Eigen::VectorXcd& x);

/// Forward map psi = exp(T(x)) e_{[d]}. The amplitude x_{[d]} never enters;
/// psi_{[d]} = 1 always.
Eigen::VectorXcd forward(const ExcitationStructure& s, const Eigen::VectorXcd& x);

/// Columns d psi / d x_v for the requested amplitude coordinates, evaluated by
/// product-rule propagation through the nilpotent power series (exact).
Eigen::MatrixXcd forward_jacobian(const ExcitationStructure& s, const Eigen::VectorXcd& x,
                                  const std::vector<int>& vars);

/// Backward map psi -> x, solved level by level: at level r,
/// x_I = eps_I (psi_I - forward(x filled below level r)_I). Requires the
/// affine chart psi_{[d]} = 1; a vanishing chart coordinate is an error.
Eigen::VectorXcd backward(const ExcitationStructure& s, const Eigen::VectorXcd& psi);

/// With amplitudes of level >= 2 all zero, forward(x) must equal the vector of
/// maximal minors of the n x d matrix [Id_d | t]^T. Returns the largest
/// deviation through `max_error` and true when it is below `tol`.
bool grassmann_column_check(const ExcitationStructure& s, const Eigen::VectorXcd& x,
                            double tol = 1e-12, double* max_error = nullptr);

}  // namespace ccvar
