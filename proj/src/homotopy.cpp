#include "ccvar/homotopy.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "ccvar/hash.hpp"
#include "ccvar/linalg.hpp"
#include "ccvar/random.hpp"

namespace ccvar {

namespace {

double scale_of(const Eigen::VectorXcd& y) { return 1.0 + y.cwiseAbs().maxCoeff(); }

// dy/dt = -J(y,t)^{-1} dF/dt(y,t); returns false on a numerically unusable J.
bool davidenko(const HomotopySegment& seg, const Eigen::VectorXcd& y, double t,
               Eigen::VectorXcd& dy) {
  Eigen::MatrixXcd jac(seg.dim(), seg.dim());
  Eigen::VectorXcd df(seg.dim());
  seg.jacobian(y, t, jac);
  seg.t_derivative(y, t, df);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(jac);
  dy = lu.solve(-df);
  return dy.allFinite();
}

}  // namespace

const char* to_string(SolutionClass c) {
  switch (c) {
    case SolutionClass::Nonsingular: return "nonsingular";
    case SolutionClass::Singular: return "singular";
    default: return "failed";
  }
}

const char* to_string(PathStatus s) {
  switch (s) {
    case PathStatus::Success: return "success";
    case PathStatus::Diverged: return "diverged";
    case PathStatus::StepUnderflow: return "step-underflow";
    default: return "max-steps";
  }
}

TrackResult track_segment(const HomotopySegment& seg, Eigen::VectorXcd y, const TrackerConfig& cfg) {
  const int n = seg.dim();
  TrackResult result;
  double t = 0;
  double dt = cfg.initial_step;
  int streak = 0;
  Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), f(n), delta(n), trial(n);
  Eigen::MatrixXcd jac(n, n);

  while (t < 1.0) {
    if (++result.steps > cfg.max_steps) {
      result.y = std::move(y);
      result.status = PathStatus::MaxSteps;
      return result;
    }
    double h = std::min(dt, 1.0 - t);

    bool ok = davidenko(seg, y, t, k1) &&
              davidenko(seg, y + 0.5 * h * k1, t + 0.5 * h, k2) &&
              davidenko(seg, y + 0.5 * h * k2, t + 0.5 * h, k3) &&
              davidenko(seg, y + h * k3, t + h, k4);
    if (ok) {
      trial = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      // Newton corrector at the advanced time
      double tn = t + h;
      bool converged = false;
      for (int it = 0; it <= cfg.max_newton_iters; ++it) {
        seg.eval(trial, tn, f);
        if (!f.allFinite()) break;
        if (f.lpNorm<Eigen::Infinity>() <= cfg.newton_tol * scale_of(trial)) {
          converged = true;
          break;
        }
        if (it == cfg.max_newton_iters) break;
        seg.jacobian(trial, tn, jac);
        delta = Eigen::PartialPivLU<Eigen::MatrixXcd>(jac).solve(f);
        if (!delta.allFinite()) break;
        trial -= delta;
      }
      if (converged) {
        y = trial;
        t = tn;
        if (y.cwiseAbs().maxCoeff() > cfg.blowup) {
          result.y = std::move(y);
          result.status = PathStatus::Diverged;
          return result;
        }
        if (++streak >= cfg.grow_after) {
          dt = std::min(dt * cfg.step_grow, cfg.max_step);
          streak = 0;
        }
        continue;
      }
    }
    streak = 0;
    dt *= cfg.step_shrink;
    if (dt < cfg.min_step) {
      result.y = std::move(y);
      result.status = PathStatus::StepUnderflow;
      return result;
    }
  }
  result.y = std::move(y);
  result.status = PathStatus::Success;
  return result;
}

double solution_distance(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  double diff = (a - b).lpNorm<Eigen::Infinity>();
  double scale = 1.0 + std::max(a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff());
  return diff / scale;
}

int SolutionSet::count(SolutionClass cls) const {
  int c = 0;
  for (const auto& s : solutions) c += s.cls == cls;
  return c;
}

int SolutionSet::real_count(SolutionClass cls) const {
  int c = 0;
  for (const auto& s : solutions) c += s.cls == cls && s.is_real;
  return c;
}

bool SolutionSet::insert(Solution sol, double tol) {
  for (const auto& present : solutions)
    if (solution_distance(present.y, sol.y) < tol) return false;
  solutions.push_back(std::move(sol));
  return true;
}

Solution classify(const SquareSystem& system, Eigen::VectorXcd y, const TrackerConfig& cfg) {
  const int n = system.dim();
  Solution sol;
  Eigen::VectorXcd f(n), delta(n);
  Eigen::MatrixXcd jac(n, n);
  double contraction = 0;
  double previous_step = -1;

  for (int it = 0; it < 16; ++it) {
    system.eval(y, f);
    if (!f.allFinite()) break;
    if (f.lpNorm<Eigen::Infinity>() <= 1e-13 * scale_of(y)) break;
    system.jacobian(y, jac);
    delta = Eigen::PartialPivLU<Eigen::MatrixXcd>(jac).solve(f);
    if (!delta.allFinite()) break;
    double step = delta.lpNorm<Eigen::Infinity>();
    if (previous_step > 0) contraction = std::max(contraction, step / previous_step);
    previous_step = step;
    y -= delta;
    if (step <= 1e-15 * scale_of(y)) break;
  }

  sol.y = y;
  system.eval(y, f);
  sol.residual = f.allFinite() ? f.lpNorm<Eigen::Infinity>() : std::numeric_limits<double>::infinity();
  system.jacobian(y, jac);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(jac);
  sol.condition = condition_estimate(lu, jac.cwiseAbs().colwise().sum().maxCoeff());

  if (sol.residual > 1e-10 * scale_of(y)) {
    sol.cls = SolutionClass::Failed;
  } else if (sol.condition > cfg.singular_threshold || contraction > 0.5) {
    sol.cls = SolutionClass::Singular;
  } else {
    sol.cls = SolutionClass::Nonsingular;
  }
  sol.is_real = y.imag().cwiseAbs().maxCoeff() <= cfg.realness_tol * scale_of(y);
  return sol;
}

namespace {

// Track every solution through the composite segment chain; results keep the
// input order so parallel execution is deterministic.
std::vector<TrackResult> track_batch(const std::vector<const HomotopySegment*>& chain,
                                     const std::vector<Eigen::VectorXcd>& starts,
                                     const TrackerConfig& cfg) {
  std::vector<TrackResult> results(starts.size());
  auto work = [&](std::size_t i) {
    Eigen::VectorXcd y = starts[i];
    TrackResult r;
    r.y = y;
    for (const HomotopySegment* seg : chain) {
      r = track_segment(*seg, std::move(r.y), cfg);
      if (r.status != PathStatus::Success) break;
    }
    results[i] = std::move(r);
  };
  int threads = std::max(1, cfg.threads);
  if (threads == 1 || starts.size() <= 1) {
    for (std::size_t i = 0; i < starts.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < starts.size(); i = next.fetch_add(1)) work(i);
      });
    for (auto& th : pool) th.join();
  }
  return results;
}

}  // namespace

SolutionSet monodromy_solve(const ParametricFamily& family,
                            const std::vector<Eigen::VectorXcd>& seeds, const TrackerConfig& cfg,
                            const StoppingRule& stop) {
  auto base = family.base_system();
  SolutionSet set;
  set.seed = cfg.seed;
  for (const auto& y : seeds) {
    Solution sol = classify(*base, y, cfg);
    if (sol.cls == SolutionClass::Nonsingular) set.insert(std::move(sol), cfg.dedup_tol);
  }
  if (set.size() == 0)
    throw NumericalFailure("monodromy_solve: no usable start solution on the base system");

  std::mt19937_64 rng(cfg.seed);
  while (set.loops < stop.max_loops) {
    if (stop.target_count && set.size() >= *stop.target_count) {
      set.stabilized = true;
      set.stop_rule = "target";
      return set;
    }
    if (set.quiet_loops >= stop.quiet_loops && set.size() > 0) {
      set.stabilized = true;
      set.stop_rule = "quiet";
      return set;
    }

    auto mid1 = family.random_system(rng);
    auto mid2 = family.random_system(rng);
    auto seg1 = family.segment(base, mid1);
    auto seg2 = family.segment(mid1, mid2);
    auto seg3 = family.segment(mid2, base);
    std::vector<const HomotopySegment*> chain{seg1.get(), seg2.get(), seg3.get()};

    std::vector<Eigen::VectorXcd> starts;
    starts.reserve(set.solutions.size());
    for (const auto& s : set.solutions) starts.push_back(s.y);

    int found = 0;
    for (auto& r : track_batch(chain, starts, cfg)) {
      if (r.status != PathStatus::Success) {
        ++set.failed_paths;
        continue;
      }
      Solution sol = classify(*base, std::move(r.y), cfg);
      if (sol.cls != SolutionClass::Nonsingular) continue;
      found += set.insert(std::move(sol), cfg.dedup_tol);
    }
    ++set.loops;
    set.quiet_loops = found == 0 ? set.quiet_loops + 1 : 0;
  }
  set.stabilized = false;
  set.stop_rule = "budget";
  return set;
}

SolutionSet cc_monodromy(std::shared_ptr<const ExcitationStructure> structure,
                         const TruncationSet& trunc, Formulation form, const TrackerConfig& cfg,
                         const StoppingRule& stop, StartSystem* start_out) {
  StartSystem start = start_system(structure, trunc, form, cfg.seed);
  CcFamily family(structure, trunc, form, start.hamiltonian.matrix);
  SolutionSet set = monodromy_solve(family, {start.unknowns(form)}, cfg, stop);
  set.system_hash = hash_string_bytes(trunc.to_string() + (form == Formulation::RankNew ? "#new" : "#trad"),
                                      hash_matrix(start.hamiltonian.matrix));
  if (start_out != nullptr) *start_out = std::move(start);
  return set;
}

SolutionSet solve_target(const ParametricFamily& family,
                         std::shared_ptr<const SquareSystem> target, const SolutionSet& generic,
                         const TrackerConfig& cfg) {
  std::mt19937_64 rng(cfg.seed ^ 0xD1B54A32D192ED03ULL);
  auto waypoint = family.random_system(rng);  // random complex detour off the discriminant
  auto seg1 = family.segment(family.base_system(), waypoint);
  auto seg2 = family.segment(waypoint, target);
  std::vector<const HomotopySegment*> chain{seg1.get(), seg2.get()};

  std::vector<Eigen::VectorXcd> starts;
  starts.reserve(generic.solutions.size());
  for (const auto& s : generic.solutions) starts.push_back(s.y);

  SolutionSet out;
  out.seed = cfg.seed;
  out.loops = generic.loops;
  out.stabilized = generic.stabilized;
  out.stop_rule = generic.stop_rule;
  for (auto& r : track_batch(chain, starts, cfg)) {
    if (r.status != PathStatus::Success) {
      ++out.failed_paths;
      continue;
    }
    Solution sol = classify(*target, std::move(r.y), cfg);
    if (sol.cls == SolutionClass::Failed) {
      ++out.failed_paths;
      continue;
    }
    out.insert(std::move(sol), cfg.dedup_tol);
  }
  return out;
}

CramerOracleResult cramer_oracle(int d, const Hamiltonian& hamiltonian, std::uint64_t seed) {
  if (d < 2 || d > 4) throw ResourceLimit("cramer_oracle: supported for 2 <= d <= 4");
  const int n = 2 * d;
  IndexTable table(d, n);
  const int size = table.size();
  if (hamiltonian.size() != size) throw InvalidInput("cramer_oracle: hamiltonian size mismatch");

  // Rescale so minors stay within double range; roots are mapped back.
  double hscale = std::max(1.0, hamiltonian.matrix.cwiseAbs().rowwise().sum().maxCoeff());
  Eigen::MatrixXcd h = hamiltonian.matrix / hscale;

  SparsePolynomial master = master_backward(d);
  const int samples = (size - 2) * (d - 1) + (size - 1) + 1;  // generic degree + 1
  const double radius = 1.5;

  std::mt19937_64 rng(seed);
  double phase = std::uniform_real_distribution<double>(0, 1)(rng);
  Eigen::VectorXcd values(samples);
  Eigen::MatrixXcd reduced(size - 1, size);
  for (int j = 0; j < samples; ++j) {
    Complex lambda = std::polar(radius, 2 * M_PI * (j + phase) / samples);
    Eigen::MatrixXcd shifted = h;
    shifted.diagonal().array() -= lambda;
    reduced = shifted.topRows(size - 1);
    Eigen::VectorXcd psi = signed_maximal_minors(reduced);
    // homogenized master: weight each term by the chart coordinate power
    Complex total = 0;
    for (const auto& [exps, coeff] : master.terms()) {
      int degree = 0;
      Complex mono = static_cast<double>(coeff);
      for (int v = 0; v < size; ++v)
        for (int e = 0; e < exps[v]; ++e) {
          mono *= psi[v];
          ++degree;
        }
      for (int e = 0; e < d - degree; ++e) mono *= psi[0];
      total += mono;
    }
    values[j] = total;
  }

  // Inverse discrete Fourier transform on the sample circle.
  std::vector<Complex> coeffs(samples);
  for (int k = 0; k < samples; ++k) {
    Complex sum = 0;
    for (int j = 0; j < samples; ++j)
      sum += values[j] * std::polar(1.0, -2 * M_PI * k * (j + phase) / samples);
    coeffs[k] = sum / (static_cast<double>(samples) * std::pow(radius, k));
  }

  double top = 0;
  for (const auto& c : coeffs) top = std::max(top, std::abs(c));
  if (top == 0) throw NumericalFailure("cramer_oracle: interpolated polynomial vanished");
  int degree = samples - 1;
  while (degree > 0 && std::abs(coeffs[degree]) < 1e-9 * top) --degree;
  coeffs.resize(degree + 1);

  CramerOracleResult result;
  result.degree = degree;
  result.roots = univariate_roots(coeffs);
  for (auto& r : result.roots) r *= hscale;
  return result;
}

}  // namespace ccvar
