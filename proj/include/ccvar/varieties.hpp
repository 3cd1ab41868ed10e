#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <vector>

#include "ccvar/expparam.hpp"
#include "ccvar/homotopy.hpp"
#include "ccvar/indexing.hpp"

namespace ccvar {

/// Static facts about one truncation variety V_sigma.
struct VarietyDescriptor {
  TruncationSet trunc;
  int dim = 0;          // |sigma~|, the projective dimension
  int ambient_dim = 0;  // C(n,d) - 1
  int codim = 0;        // number of defining equations
  std::vector<int> defining_levels;
  bool is_linear = false;
};

/// V_sigma is a linear space exactly when sigma is closed under addition
/// inside [d].
bool is_linear(const TruncationSet& trunc);

VarietyDescriptor describe(const IndexTable& table, const TruncationSet& trunc);

/// The affine complete intersection cutting out V_sigma on the chart
/// psi_{[d]} = 1: evaluators for psi -> x_I(psi) at every I whose level lies
/// outside sigma, with the analytic Jacobian in the non-reference coordinates.
class DefiningEquations {
 public:
  DefiningEquations(std::shared_ptr<const ExcitationStructure> structure, TruncationSet trunc);

  int count() const { return static_cast<int>(rows_.size()); }
  const std::vector<int>& rows() const { return rows_; }
  const ExcitationStructure& structure() const { return *structure_; }

  /// psi is a full-length vector with psi[0] = 1.
  Eigen::VectorXcd eval(const Eigen::VectorXcd& psi) const;
  /// Jacobian with respect to the C(n,d) - 1 non-reference coordinates.
  Eigen::MatrixXcd jacobian(const Eigen::VectorXcd& psi) const;

 private:
  std::shared_ptr<const ExcitationStructure> structure_;
  TruncationSet trunc_;
  std::vector<int> rows_;       // global indices of defining coordinates
  std::vector<int> all_vars_;   // all non-reference coordinates
};

struct DegreeResult {
  int degree = 0;
  bool stabilized = false;
  int runs = 0;                // seeds actually used
  std::vector<int> run_counts; // per-seed stabilized counts
  int loops = 0;               // loops of the accepted run
  int quiet_loops = 0;
};

/// Degree of V_sigma by intersecting with a seeded random affine-linear slice
/// of complementary dimension and counting monodromy-stabilized solutions.
/// Reruns with up to three seeds and keeps the maximum; two agreeing
/// stabilized runs finish early. A run that never stabilizes is reported
/// inconclusive (stabilized = false) with the partial count, never a silent
/// wrong answer.
DegreeResult numerical_degree(std::shared_ptr<const ExcitationStructure> structure,
                              const TruncationSet& trunc, const TrackerConfig& cfg,
                              const StoppingRule& stop);

/// Bezout-type bound (dim V_sigma + 1) * deg V_sigma for the CC degree.
std::uint64_t cc_degree_bound(const IndexTable& table, const TruncationSet& trunc,
                              std::uint64_t degree);

/// Closed form 4/n * C(2n-3, n-1) - 1 for the CC degree of Gr(2, n), n >= 4.
std::uint64_t grassmannian_cc_degree(int n);

/// Closed form d * C(2d, d) - 2d + 1 for the hypersurface truncation
/// sigma = [d-1] at n = 2d.
std::uint64_t hypersurface_cc_degree(int d);

}  // namespace ccvar
