#include "ccvar/expparam.hpp"

#include <Eigen/Dense>
#include <algorithm>

namespace ccvar {

namespace {

// Enumerate subsets of `pool` of size `count` into `out` (masks).
void size_subsets(OrbitalMask pool, int count, std::vector<OrbitalMask>& out) {
  out.clear();
  std::vector<int> bits = mask_members(pool);
  int m = static_cast<int>(bits.size());
  if (count > m) return;
  std::vector<int> idx(count);
  for (int i = 0; i < count; ++i) idx[i] = i;
  while (true) {
    OrbitalMask s = 0;
    for (int i : idx) s |= OrbitalMask{1} << (bits[i] - 1);
    out.push_back(s);
    int i = count - 1;
    while (i >= 0 && idx[i] == m - (count - i)) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < count; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace

ExcitationStructure::ExcitationStructure(const IndexTable& table) : table_(&table) {
  const int d = table.d(), n = table.n();
  OrbitalMask ref = reference_mask(d);
  OrbitalMask virt = reference_mask(n) & ~ref;

  // Column I receives entries for J = (I \ A) cup B over nonempty A in
  // I cap [d] and B of matching size outside [d] and I.
  std::vector<OrbitalMask> as, bs;
  for (int col = 0; col < table.size(); ++col) {
    OrbitalMask setI = table.set_at(col);
    OrbitalMask occ = setI & ref;
    OrbitalMask avail = virt & ~setI;
    int amax = std::min(popcount(occ), popcount(avail));
    for (int a = 1; a <= amax; ++a) {
      size_subsets(occ, a, as);
      size_subsets(avail, a, bs);
      for (OrbitalMask A : as)
        for (OrbitalMask B : bs) {
          OrbitalMask setJ = (setI & ~A) | B;
          OrbitalMask var = (ref & ~A) | B;
          entries_.push_back(Entry{table.index_of(setJ), col, table.index_of(var),
                                   static_cast<double>(t_entry_sign(setJ, setI))});
        }
    }
  }

  std::sort(entries_.begin(), entries_.end(),
            [](const Entry& a, const Entry& b) { return a.var != b.var ? a.var < b.var : a.col < b.col; });
  var_range_.assign(table.size(), {0, 0});
  for (std::size_t i = 0; i < entries_.size();) {
    std::size_t j = i;
    while (j < entries_.size() && entries_[j].var == entries_[i].var) ++j;
    var_range_[entries_[i].var] = {static_cast<int>(i), static_cast<int>(j)};
    i = j;
  }

  eps_.assign(table.size(), 1);
  for (int i = 1; i < table.size(); ++i) eps_[i] = t_entry_sign(table.set_at(i), ref);
}

void ExcitationStructure::apply(const Eigen::VectorXcd& x, const Eigen::VectorXcd& v,
                                Eigen::VectorXcd& y) const {
  for (const Entry& e : entries_) y[e.row] += e.sign * x[e.var] * v[e.col];
}

void ExcitationStructure::apply_transposed(const Eigen::VectorXcd& x, const Eigen::VectorXcd& v,
                                           Eigen::VectorXcd& y) const {
  for (const Entry& e : entries_) y[e.col] += e.sign * x[e.var] * v[e.row];
}

void ExcitationStructure::apply_single(int var, const Eigen::VectorXcd& v, Eigen::VectorXcd& y) const {
  auto [begin, end] = var_range_[var];
  for (int i = begin; i < end; ++i) {
    const Entry& e = entries_[i];
    y[e.row] += e.sign * v[e.col];
  }
}

Eigen::SparseMatrix<Complex> ExcitationStructure::matrix(const Eigen::VectorXcd& x) const {
  std::vector<Eigen::Triplet<Complex>> triplets;
  triplets.reserve(entries_.size());
  for (const Entry& e : entries_) triplets.emplace_back(e.row, e.col, e.sign * x[e.var]);
  Eigen::SparseMatrix<Complex> t(dim(), dim());
  t.setFromTriplets(triplets.begin(), triplets.end());
  return t;
}

Eigen::VectorXcd apply_exp(const ExcitationStructure& s, const Eigen::VectorXcd& x,
                           const Eigen::VectorXcd& v) {
  Eigen::VectorXcd acc = v, power = v, next(s.dim());
  for (int k = 1; k <= s.table().d(); ++k) {
    next.setZero();
    s.apply(x, power, next);
    power = next / static_cast<double>(k);
    acc += power;
  }
  return acc;
}

Eigen::MatrixXcd exp_matrix(const ExcitationStructure& s, const Eigen::VectorXcd& x) {
  Eigen::MatrixXcd out(s.dim(), s.dim());
  Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(s.dim());
  for (int j = 0; j < s.dim(); ++j) {
    unit[j] = 1;
    out.col(j) = apply_exp(s, x, unit);
    unit[j] = 0;
  }
  return out;
}

Eigen::VectorXcd forward(const ExcitationStructure& s, const Eigen::VectorXcd& x) {
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(s.dim());
  e[0] = 1;
  return apply_exp(s, x, e);
}

Eigen::MatrixXcd forward_jacobian(const ExcitationStructure& s, const Eigen::VectorXcd& x,
                                  const std::vector<int>& vars) {
  const int n = s.dim(), d = s.table().d();
  Eigen::MatrixXcd jac(n, static_cast<int>(vars.size()));
  Eigen::VectorXcd v(n), dv(n), tv(n), tdv(n);
  for (std::size_t c = 0; c < vars.size(); ++c) {
    v.setZero();
    v[0] = 1;
    dv.setZero();
    Eigen::VectorXcd acc = dv;
    // v_k = T^k e / k!, dv_k = d v_k / d x_var; product rule per power
    for (int k = 1; k <= d; ++k) {
      tdv.setZero();
      s.apply(x, dv, tdv);
      s.apply_single(vars[c], v, tdv);
      tv.setZero();
      s.apply(x, v, tv);
      dv = tdv / static_cast<double>(k);
      v = tv / static_cast<double>(k);
      acc += dv;
    }
    jac.col(static_cast<int>(c)) = acc;
  }
  return jac;
}

Eigen::VectorXcd backward(const ExcitationStructure& s, const Eigen::VectorXcd& psi) {
  const IndexTable& table = s.table();
  if (psi[0] == Complex(0, 0))
    throw InvalidInput("state has chart coordinate psi_{[d]} = 0 (point at infinity); dehomogenize first");
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(s.dim());
  x[0] = 1;
  for (int lvl = 1; lvl <= table.max_level(); ++lvl) {
    Eigen::VectorXcd partial = forward(s, x);
    for (int i = table.level_begin(lvl); i < table.level_end(lvl); ++i)
      x[i] = static_cast<double>(s.epsilon(i)) * (psi[i] - partial[i]);
  }
  return x;
}

bool grassmann_column_check(const ExcitationStructure& s, const Eigen::VectorXcd& x,
                            double tol, double* max_error) {
  const IndexTable& table = s.table();
  const int d = table.d(), n = table.n();
  for (int i = 0; i < table.size(); ++i)
    if (table.level_of(i) >= 2 && x[i] != Complex(0, 0))
      throw InvalidInput("grassmann_column_check requires all amplitudes of level >= 2 to vanish");

  // Columns of [Id_d | t]^T: column i is e_i plus sum_j t_{i,j} e_j with
  // t_{i,j} the level-one amplitude moving orbital i to orbital j.
  Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(n, d);
  OrbitalMask ref = reference_mask(d);
  for (int i = 1; i <= d; ++i) {
    basis(i - 1, i - 1) = 1;
    for (int j = d + 1; j <= n; ++j) {
      OrbitalMask var = (ref & ~(OrbitalMask{1} << (i - 1))) | (OrbitalMask{1} << (j - 1));
      basis(j - 1, i - 1) = x[table.index_of(var)];
    }
  }

  Eigen::VectorXcd psi = forward(s, x);
  double scale = psi.lpNorm<Eigen::Infinity>();
  double worst = 0;
  Eigen::MatrixXcd minor(d, d);
  for (int i = 0; i < table.size(); ++i) {
    std::vector<int> rows = mask_members(table.set_at(i));
    for (int r = 0; r < d; ++r) minor.row(r) = basis.row(rows[r] - 1);
    worst = std::max(worst, std::abs(minor.determinant() - psi[i]));
  }
  if (max_error != nullptr) *max_error = worst;
  return worst <= tol * std::max(1.0, scale);
}

}  // namespace ccvar
