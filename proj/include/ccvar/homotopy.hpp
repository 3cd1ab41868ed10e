#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccvar/ccsystem.hpp"
#include "ccvar/system.hpp"

namespace ccvar {

struct TrackerConfig {
  double initial_step = 0.05;
  double min_step = 1e-7;
  double max_step = 0.2;
  /// Corrector succeeds when ||F||_inf <= newton_tol * (1 + ||y||_inf).
  double newton_tol = 1e-12;
  int max_newton_iters = 3;
  double step_shrink = 0.5;
  double step_grow = 1.7;
  int grow_after = 4;  // consecutive accepted steps before dt grows
  int max_steps = 20000;
  double blowup = 1e10;  // ||y|| beyond this counts as divergence to infinity
  double singular_threshold = 1e8;
  double realness_tol = 1e-8;
  double dedup_tol = 1e-6;
  int threads = 1;
  std::uint64_t seed = 1;
};

enum class PathStatus { Success, Diverged, StepUnderflow, MaxSteps };

struct TrackResult {
  Eigen::VectorXcd y;
  PathStatus status = PathStatus::Success;
  int steps = 0;
};

/// Follow one solution of F(., 0) to t = 1: explicit fourth-order predictor on
/// the Davidenko equation, Newton corrector, adaptive step halving/growth.
/// Failed paths are reported through the status, never dropped silently.
TrackResult track_segment(const HomotopySegment& segment, Eigen::VectorXcd start,
                          const TrackerConfig& cfg);

enum class SolutionClass { Nonsingular, Singular, Failed };

const char* to_string(SolutionClass c);
const char* to_string(PathStatus s);

struct Solution {
  Eigen::VectorXcd y;
  double residual = 0;
  double condition = 0;
  SolutionClass cls = SolutionClass::Failed;
  bool is_real = false;
};

/// Relative max-norm distance used for deduplication.
double solution_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b);

struct SolutionSet {
  std::vector<Solution> solutions;
  // provenance
  std::uint64_t system_hash = 0;
  std::uint64_t seed = 0;
  int loops = 0;
  int quiet_loops = 0;  // loops since the last new solution
  bool stabilized = false;
  std::string stop_rule;  // "quiet" | "target" | "budget"
  int failed_paths = 0;

  int size() const { return static_cast<int>(solutions.size()); }
  int count(SolutionClass cls) const;
  int real_count(SolutionClass cls) const;
  /// Inserts unless within dedup tolerance of a present solution.
  bool insert(Solution sol, double tol);
};

/// Newton-polish an endpoint and classify it: nonsingular when the residual
/// drops below tolerance with a healthy condition estimate, singular when the
/// Jacobian is effectively rank deficient or Newton contracts too slowly,
/// failed when the iteration does not settle. Realness compares imaginary
/// parts against realness_tol * (1 + ||y||).
Solution classify(const SquareSystem& system, Eigen::VectorXcd y, const TrackerConfig& cfg);

struct StoppingRule {
  int quiet_loops = 10;
  int max_loops = 400;
  std::optional<int> target_count;  // stop early when a known count is reached
};

/// Monodromy solution discovery: move the system around random triangle loops
/// in parameter space, tracking every known solution and registering new
/// endpoints, until the set is quiet for `quiet_loops` loops or the target
/// count is reached. A run that exhausts max_loops is returned with
/// stabilized = false (lower bound only).
SolutionSet monodromy_solve(const ParametricFamily& family,
                            const std::vector<Eigen::VectorXcd>& seeds, const TrackerConfig& cfg,
                            const StoppingRule& stop);

/// Start system + monodromy for the CC equations at one truncation.
SolutionSet cc_monodromy(std::shared_ptr<const ExcitationStructure> structure,
                         const TruncationSet& trunc, Formulation form, const TrackerConfig& cfg,
                         const StoppingRule& stop, StartSystem* start_out = nullptr);

/// Parameter homotopy of a complete generic solution set to a target system,
/// through one random complex waypoint to stay clear of the discriminant.
/// Endpoints are classified, deduplicated and counted by class and realness.
SolutionSet solve_target(const ParametricFamily& family,
                         std::shared_ptr<const SquareSystem> target, const SolutionSet& generic,
                         const TrackerConfig& cfg);

/// Univariate oracle for the hypersurface truncation sigma = [d-1] at n = 2d:
/// writes the state as signed maximal minors of (H - lambda Id) with the last
/// row deleted, interpolates the master polynomial along that curve and
/// returns the exact degree plus all lambda roots. Generic Hamiltonians give
/// degree d * C(2d, d) - 2d + 1.
struct CramerOracleResult {
  int degree = 0;
  std::vector<Complex> roots;
};
CramerOracleResult cramer_oracle(int d, const Hamiltonian& hamiltonian, std::uint64_t seed);

}  // namespace ccvar
