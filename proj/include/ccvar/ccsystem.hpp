#pragma once

#include <Eigen/Core>
#include <memory>
#include <string>
#include <vector>

#include "ccvar/expparam.hpp"
#include "ccvar/system.hpp"

namespace ccvar {

/// Which square system encodes the coupled cluster equations.
///
/// RankNew: [(H - lambda Id) exp(T(z)) e]_rows = 0 over rows sigma-tilde plus
/// the reference row, |sigma~|+1 equations in (z, lambda).
///
/// SimilarityTraditional: [exp(T(-z)) H exp(T(z)) e]_rows = 0 over rows
/// sigma-tilde, |sigma~| equations in z alone.
enum class Formulation { RankNew, SimilarityTraditional };

struct Hamiltonian {
  Eigen::MatrixXcd matrix;
  std::string provenance;

  int size() const { return static_cast<int>(matrix.rows()); }
  bool is_real(double tol = 0.0) const;
};

void save_hamiltonian(const std::string& path, const Hamiltonian& h, int d, int n);
/// Reads the binary or JSON format (by .json extension); checks (d, n).
Hamiltonian load_hamiltonian(const std::string& path, int d, int n);

/// Full amplitude vector from truncated unknowns: reference coordinate 1,
/// sigma-tilde coordinates from z, all others 0.
Eigen::VectorXcd embed(const IndexTable& table, const std::vector<int>& sigma_tilde_indices,
                       const Eigen::VectorXcd& z);

/// The CC equations for one (Hamiltonian, truncation, formulation) triple.
/// Unknown layout: the amplitudes z in global sigma-tilde order, then lambda
/// for the rank formulation. Residuals are affine-linear in H at fixed
/// unknowns, which is what the homotopy blending relies on.
class CcSystem final : public SquareSystem {
 public:
  CcSystem(std::shared_ptr<const ExcitationStructure> structure, TruncationSet trunc,
           Eigen::MatrixXcd hamiltonian, Formulation formulation);

  int dim() const override;
  void eval(const Eigen::VectorXcd& y, Eigen::VectorXcd& f) const override;
  void jacobian(const Eigen::VectorXcd& y, Eigen::MatrixXcd& jac) const override;

  const ExcitationStructure& structure() const { return *structure_; }
  std::shared_ptr<const ExcitationStructure> structure_ptr() const { return structure_; }
  const TruncationSet& trunc() const { return trunc_; }
  Formulation formulation() const { return form_; }
  const Eigen::MatrixXcd& hamiltonian() const { return h_; }
  /// Global indices of the unknown amplitudes (sigma-tilde, global order).
  const std::vector<int>& unknown_indices() const { return vars_; }
  /// Global indices of the residual rows.
  const std::vector<int>& residual_rows() const { return rows_; }
  int amplitude_count() const { return static_cast<int>(vars_.size()); }

  Eigen::VectorXcd embed_amplitudes(const Eigen::VectorXcd& z) const;
  /// psi = exp(T(z)) e.
  Eigen::VectorXcd state(const Eigen::VectorXcd& z) const;
  /// The Rayleigh-type energy (H psi)_{[d]} of a truncated amplitude vector;
  /// pairs a traditional solution with its lambda.
  Complex energy(const Eigen::VectorXcd& z) const;

 private:
  std::shared_ptr<const ExcitationStructure> structure_;
  TruncationSet trunc_;
  Eigen::MatrixXcd h_;
  Formulation form_;
  std::vector<int> vars_;
  std::vector<int> rows_;
};

/// True exactly when sigma = {m, 2m, ..., km} for some m, k: the truncations
/// for which the rank and similarity formulations have the same solutions.
bool formulations_equivalent(const TruncationSet& trunc);

struct StartSystem {
  Hamiltonian hamiltonian;
  Eigen::VectorXcd z;
  Complex lambda = 0;  // unused for the traditional formulation

  /// Unknown vector in system layout.
  Eigen::VectorXcd unknowns(Formulation form) const;
};

/// Samples random complex (z, lambda), then solves the residual's H-linear
/// map for a symmetric Hamiltonian through that solution: a random particular
/// matrix plus a least-norm correction. Degenerate samples are retried.
StartSystem start_system(std::shared_ptr<const ExcitationStructure> structure,
                         const TruncationSet& trunc, Formulation form, std::uint64_t seed);

/// Monodromy family of CC systems over the space of complex symmetric
/// Hamiltonians at fixed truncation and formulation.
class CcFamily final : public ParametricFamily {
 public:
  CcFamily(std::shared_ptr<const ExcitationStructure> structure, TruncationSet trunc,
           Formulation form, Eigen::MatrixXcd base_hamiltonian);

  std::shared_ptr<const SquareSystem> base_system() const override { return base_; }
  std::shared_ptr<const SquareSystem> random_system(std::mt19937_64& rng) const override;
  std::unique_ptr<HomotopySegment> segment(std::shared_ptr<const SquareSystem> from,
                                           std::shared_ptr<const SquareSystem> to) const override;

  std::shared_ptr<const CcSystem> make_system(Eigen::MatrixXcd hamiltonian) const;

 private:
  std::shared_ptr<const ExcitationStructure> structure_;
  TruncationSet trunc_;
  Formulation form_;
  std::shared_ptr<const CcSystem> base_;
};

}  // namespace ccvar
