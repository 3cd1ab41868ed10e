#pragma once

#include <Eigen/Core>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "ccvar/indexing.hpp"

namespace ccvar {

using Complex = std::complex<double>;

/// A uniform block permutation of [2d]: blocks (alpha_i, beta_i) with the
/// alpha_i partitioning [d], the beta_i partitioning [2d] \ [d] and
/// |alpha_i| = |beta_i| >= 1. Blocks are stored by increasing min(alpha_i).
struct UniformBlockPermutation {
  std::vector<BlockLabel> blocks;
  int sign = 1;  // product of the signs of the two block-concatenation permutations
  int nu = 0;    // d(d-1)/2 - sum_r |alpha_r|(|alpha_r|-1)/2

  int block_count() const { return static_cast<int>(blocks.size()); }
  /// Moebius coefficient (-1)^{k-1} (k-1)!.
  std::int64_t mobius() const;
};

/// All uniform block permutations of [2d]. Desk-scale cap d <= 6
/// (22482 elements); larger d raises ResourceLimit.
std::vector<UniformBlockPermutation> enumerate_ubp(int d);

/// Multivariate polynomial with exact integer coefficients. Exponent vectors
/// are dense arrays keyed by the global order of an IndexTable; coefficients
/// widen to complex floating point only at evaluation time.
class SparsePolynomial {
 public:
  using ExponentVector = std::vector<std::uint8_t>;

  explicit SparsePolynomial(int nvars) : nvars_(nvars) {}

  int nvars() const { return nvars_; }
  const std::map<ExponentVector, std::int64_t>& terms() const { return terms_; }
  int term_count() const { return static_cast<int>(terms_.size()); }

  /// Adds c * x^exponents, erasing the term if the total cancels to zero.
  void add(const ExponentVector& exponents, std::int64_t c);
  std::int64_t coefficient(const ExponentVector& exponents) const;

  Complex eval(const Eigen::VectorXcd& point) const;

  SparsePolynomial operator+(const SparsePolynomial& other) const;
  SparsePolynomial operator*(const SparsePolynomial& other) const;

  /// Substitutes replacement[v] for variable v and expands. Every variable
  /// appearing with a positive exponent must have a replacement with the same
  /// variable universe.
  SparsePolynomial substituted(const std::vector<const SparsePolynomial*>& replacement) const;

  bool operator==(const SparsePolynomial&) const = default;

 private:
  int nvars_;
  std::map<ExponentVector, std::int64_t> terms_;
};

/// Master polynomial of the forward map: the state coordinate of the top index
/// set [2d] \ [d] as a polynomial in amplitudes, one monomial per uniform
/// block permutation, all coefficients +-1.
SparsePolynomial master_forward(int d);

/// Master polynomial of the backward map: the top amplitude as a polynomial in
/// state coordinates; coefficient magnitude (k-1)! for a k-block monomial.
SparsePolynomial master_backward(int d);

/// Index-relabels a degree-r master polynomial (variables over the (r, 2r)
/// grid) to the coordinate of `target` on the (d, n) grid of `table`. The
/// result carries the global linear sign of the target coordinate, so it
/// agrees with the directly constructed forward/backward coordinate maps.
SparsePolynomial replicate(const SparsePolynomial& master, const IndexTable& master_table,
                           const IndexTable& table, OrbitalMask target);

}  // namespace ccvar
