#include "ccvar/varieties.hpp"

#include <Eigen/Dense>

#include "ccvar/random.hpp"

namespace ccvar {

bool is_linear(const TruncationSet& trunc) {
  for (int i : trunc.sigma)
    for (int j : trunc.sigma)
      if (i + j <= trunc.d && !trunc.contains(i + j)) return false;
  return true;
}

VarietyDescriptor describe(const IndexTable& table, const TruncationSet& trunc) {
  VarietyDescriptor out;
  out.trunc = trunc;
  out.dim = static_cast<int>(sigma_tilde(table, trunc).size());
  out.ambient_dim = table.size() - 1;
  out.defining_levels = trunc.defining_levels();
  out.codim = 0;
  for (int lvl : out.defining_levels) out.codim += table.level_count(lvl);
  out.is_linear = is_linear(trunc);
  return out;
}

DefiningEquations::DefiningEquations(std::shared_ptr<const ExcitationStructure> structure,
                                     TruncationSet trunc)
    : structure_(std::move(structure)), trunc_(std::move(trunc)) {
  const IndexTable& table = structure_->table();
  for (int lvl : trunc_.defining_levels())
    for (int i = table.level_begin(lvl); i < table.level_end(lvl); ++i) rows_.push_back(i);
  std::sort(rows_.begin(), rows_.end());
  for (int i = 1; i < table.size(); ++i) all_vars_.push_back(i);
}

Eigen::VectorXcd DefiningEquations::eval(const Eigen::VectorXcd& psi) const {
  Eigen::VectorXcd x = backward(*structure_, psi);
  Eigen::VectorXcd out(count());
  for (int i = 0; i < count(); ++i) out[i] = x[rows_[i]];
  return out;
}

Eigen::MatrixXcd DefiningEquations::jacobian(const Eigen::VectorXcd& psi) const {
  // d x / d psi is the inverse of the forward Jacobian at x(psi); rows of the
  // inverse are obtained from transposed solves.
  const IndexTable& table = structure_->table();
  Eigen::VectorXcd x = backward(*structure_, psi);
  Eigen::MatrixXcd dpsi_full = forward_jacobian(*structure_, x, all_vars_);
  const int m = table.size() - 1;
  Eigen::MatrixXcd square(m, m);
  for (int r = 0; r < m; ++r) square.row(r) = dpsi_full.row(r + 1);  // drop the constant reference row

  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(square.transpose());
  Eigen::MatrixXcd out(count(), m);
  Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(m);
  for (int i = 0; i < count(); ++i) {
    unit[rows_[i] - 1] = 1;
    out.row(i) = lu.solve(unit).transpose();
    unit[rows_[i] - 1] = 0;
  }
  return out;
}

namespace {

// Square system in the slice coordinates u: the defining equations evaluated
// on psi = psi0 + A u + b (non-reference coordinates only).
class SliceSystem final : public SquareSystem {
 public:
  SliceSystem(std::shared_ptr<const DefiningEquations> eqs, Eigen::VectorXcd psi0,
              Eigen::MatrixXcd a, Eigen::VectorXcd b)
      : eqs_(std::move(eqs)), psi0_(std::move(psi0)), a_(std::move(a)), b_(std::move(b)) {}

  int dim() const override { return static_cast<int>(a_.cols()); }

  Eigen::VectorXcd point(const Eigen::VectorXcd& u) const {
    Eigen::VectorXcd psi = psi0_;
    psi.tail(psi.size() - 1) += a_ * u + b_;
    return psi;
  }

  void eval(const Eigen::VectorXcd& u, Eigen::VectorXcd& f) const override {
    f = eqs_->eval(point(u));
  }

  void jacobian(const Eigen::VectorXcd& u, Eigen::MatrixXcd& jac) const override {
    jac = eqs_->jacobian(point(u)) * a_;
  }

  const Eigen::MatrixXcd& a() const { return a_; }
  const Eigen::VectorXcd& b() const { return b_; }
  const Eigen::VectorXcd& psi0() const { return psi0_; }

 private:
  std::shared_ptr<const DefiningEquations> eqs_;
  Eigen::VectorXcd psi0_;
  Eigen::MatrixXcd a_;
  Eigen::VectorXcd b_;
};

// Straight-line interpolation of the slice parameters (A, b); the defining
// equations are nonlinear in psi, so this cannot reuse the affine blending.
class SliceSegment final : public HomotopySegment {
 public:
  SliceSegment(std::shared_ptr<const DefiningEquations> eqs, const SliceSystem& from,
               const SliceSystem& to)
      : eqs_(std::move(eqs)), psi0_(from.psi0()), a0_(from.a()), b0_(from.b()),
        da_(to.a() - from.a()), db_(to.b() - from.b()) {}

  int dim() const override { return static_cast<int>(a0_.cols()); }

  void eval(const Eigen::VectorXcd& u, double t, Eigen::VectorXcd& f) const override {
    f = eqs_->eval(point(u, t));
  }

  void jacobian(const Eigen::VectorXcd& u, double t, Eigen::MatrixXcd& jac) const override {
    jac = eqs_->jacobian(point(u, t)) * (a0_ + t * da_);
  }

  void t_derivative(const Eigen::VectorXcd& u, double t, Eigen::VectorXcd& df) const override {
    df = eqs_->jacobian(point(u, t)) * (da_ * u + db_);
  }

 private:
  Eigen::VectorXcd point(const Eigen::VectorXcd& u, double t) const {
    Eigen::VectorXcd psi = psi0_;
    psi.tail(psi.size() - 1) += (a0_ + t * da_) * u + b0_ + t * db_;
    return psi;
  }

  std::shared_ptr<const DefiningEquations> eqs_;
  Eigen::VectorXcd psi0_;
  Eigen::MatrixXcd a0_;
  Eigen::VectorXcd b0_;
  Eigen::MatrixXcd da_;
  Eigen::VectorXcd db_;
};

class SliceFamily final : public ParametricFamily {
 public:
  SliceFamily(std::shared_ptr<const DefiningEquations> eqs, Eigen::VectorXcd psi0,
              std::uint64_t seed)
      : eqs_(std::move(eqs)), psi0_(std::move(psi0)) {
    std::mt19937_64 rng(seed);
    const int m = static_cast<int>(psi0_.size()) - 1;
    base_ = std::make_shared<SliceSystem>(eqs_, psi0_, complex_gaussian_matrix(m, eqs_->count(), rng),
                                          Eigen::VectorXcd::Zero(m));
  }

  std::shared_ptr<const SquareSystem> base_system() const override { return base_; }

  std::shared_ptr<const SquareSystem> random_system(std::mt19937_64& rng) const override {
    const int m = static_cast<int>(psi0_.size()) - 1;
    return std::make_shared<SliceSystem>(eqs_, psi0_, complex_gaussian_matrix(m, eqs_->count(), rng),
                                         complex_gaussian_vector(m, rng));
  }

  std::unique_ptr<HomotopySegment> segment(std::shared_ptr<const SquareSystem> from,
                                           std::shared_ptr<const SquareSystem> to) const override {
    return std::make_unique<SliceSegment>(eqs_, static_cast<const SliceSystem&>(*from),
                                          static_cast<const SliceSystem&>(*to));
  }

 private:
  std::shared_ptr<const DefiningEquations> eqs_;
  Eigen::VectorXcd psi0_;
  std::shared_ptr<const SliceSystem> base_;
};

}  // namespace

DegreeResult numerical_degree(std::shared_ptr<const ExcitationStructure> structure,
                              const TruncationSet& trunc, const TrackerConfig& cfg,
                              const StoppingRule& stop) {
  const IndexTable& table = structure->table();
  auto eqs = std::make_shared<DefiningEquations>(structure, trunc);
  std::vector<int> vars = sigma_tilde(table, trunc);

  DegreeResult result;
  for (int run = 0; run < 3; ++run) {
    TrackerConfig run_cfg = cfg;
    run_cfg.seed = cfg.seed + static_cast<std::uint64_t>(run);
    std::mt19937_64 rng(run_cfg.seed * 0x9e3779b97f4a7c15ULL + 1);

    // A random point of the variety anchors a slice through it: u = 0 solves
    // the base slice system by construction.
    Eigen::VectorXcd z = complex_gaussian_vector(static_cast<int>(vars.size()), rng);
    Eigen::VectorXcd psi0 = forward(*structure, embed(table, vars, z));
    SliceFamily family(eqs, psi0, rng());

    SolutionSet set = monodromy_solve(family, {Eigen::VectorXcd::Zero(eqs->count())}, run_cfg, stop);
    ++result.runs;
    result.run_counts.push_back(set.size());
    if (set.size() > result.degree || (set.size() == result.degree && set.stabilized && !result.stabilized)) {
      result.degree = set.size();
      result.stabilized = set.stabilized;
      result.loops = set.loops;
      result.quiet_loops = set.quiet_loops;
    }
    if (result.runs >= 2 && result.stabilized &&
        result.run_counts[result.runs - 1] == result.run_counts[result.runs - 2])
      break;
  }
  return result;
}

std::uint64_t cc_degree_bound(const IndexTable& table, const TruncationSet& trunc,
                              std::uint64_t degree) {
  return (sigma_tilde(table, trunc).size() + 1) * degree;
}

std::uint64_t grassmannian_cc_degree(int n) {
  if (n < 4) throw InvalidInput("grassmannian_cc_degree requires n >= 4");
  std::uint64_t b = binomial(2 * n - 3, n - 1);
  return 4 * b / static_cast<std::uint64_t>(n) - 1;  // exact: n divides 4*C(2n-3,n-1)
}

std::uint64_t hypersurface_cc_degree(int d) {
  if (d < 2) throw InvalidInput("hypersurface_cc_degree requires d >= 2");
  return static_cast<std::uint64_t>(d) * binomial(2 * d, d) - 2 * d + 1;
}

}  // namespace ccvar
