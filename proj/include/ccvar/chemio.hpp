#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <string>
#include <vector>

#include "ccvar/ccsystem.hpp"
#include "ccvar/homotopy.hpp"
#include "ccvar/indexing.hpp"

namespace ccvar {

/// One- and two-electron integrals over n spin orbitals, with the two-electron
/// tensor in the charge-cloud pairing v[p,q,r,s] = (pq|rs). Orbitals 1..d are
/// the occupied reference, d+1..n virtual; input files must already use this
/// order.
class IntegralTable {
 public:
  IntegralTable(int n, int d);

  int n() const { return n_; }
  int d() const { return d_; }
  double core() const { return core_; }
  void set_core(double value) { core_ = value; }

  double h(int p, int q) const;
  double v(int p, int q, int r, int s) const;
  /// Stores the value together with all its symmetry images (h: p<->q,
  /// v: p<->q, r<->s, (pq)<->(rs)); inconsistent reassignment is an error.
  void set_h(int p, int q, double value);
  void set_v(int p, int q, int r, int s, double value);

 private:
  int slot(int p, int q, int r, int s) const;
  void assign(std::vector<double>& store, std::vector<bool>& seen, int idx, double value,
              const std::string& what);

  int n_;
  int d_;
  double core_ = 0;
  std::vector<double> h_;
  std::vector<double> v_;
  std::vector<bool> h_seen_;
  std::vector<bool> v_seen_;
};

/// Text format: header `CCVAR-INTEGRALS n=<n> d=<d> core=<float>`, then lines
/// `value p q r s` (1-based; r=s=0 marks a one-electron entry; all indices 0
/// sets the core offset). '#' starts a comment.
IntegralTable parse_integrals(std::istream& in);
IntegralTable parse_integrals_file(const std::string& path);
void write_integrals(std::ostream& out, const IntegralTable& table);
void write_integrals_file(const std::string& path, const IntegralTable& table);

/// Expand spatial-orbital integrals over k orbitals to n = 2k spin orbitals,
/// interleaved (spatial i -> spin orbitals 2i-1, 2i); the two-electron tensor
/// vanishes unless both charge clouds are spin diagonal.
IntegralTable spin_expand(int d, const Eigen::MatrixXd& h_spatial,
                          const std::vector<double>& v_spatial, double core = 0);

/// Full many-body Hamiltonian by Slater-Condon case analysis: entries vanish
/// unless the index sets differ in at most two orbitals. Output is exactly
/// symmetric.
Hamiltonian assemble_hamiltonian(const IndexTable& table, const IntegralTable& integrals);

/// The same matrix by the literal double-permutation expansion, up to a
/// global normalization of d! relative to the Slater-Condon form. Exponential
/// in d; an oracle for tests, not a production path.
Eigen::MatrixXd assemble_hamiltonian_reference(const IndexTable& table,
                                               const IntegralTable& integrals);

enum class HamiltonianKind { GenericComplexSymmetric, RealSymmetric, LowRank };

Hamiltonian random_hamiltonian(const IndexTable& table, HamiltonianKind kind, int rank,
                               std::uint64_t seed);

struct SpectrumEntry {
  std::string kind;  // nonsingular-real | nonsingular-complex | singular-real | singular-complex
  Complex lambda;
  double nearest_fci = 0;
  double distance = 0;
};

struct SpectrumReport {
  Eigen::VectorXd fci;  // ascending exact eigenvalues
  std::vector<SpectrumEntry> entries;
  int nonsingular_real = 0;
  int nonsingular_complex = 0;
  int singular_real = 0;
  int singular_complex = 0;
};

/// Compare CC solution energies against exact diagonalization. `lambdas`
/// carries one energy per solution in `solutions` (rank formulation: the last
/// unknown; traditional: the Rayleigh energy of z).
SpectrumReport spectrum_report(const Hamiltonian& hamiltonian, const SolutionSet& solutions,
                               const std::vector<Complex>& lambdas);

std::string spectrum_csv(const SpectrumReport& report);

}  // namespace ccvar
