#pragma once

#include <Eigen/Core>
#include <memory>
#include <random>

#include "ccvar/ubp.hpp"

namespace ccvar {

/// A square polynomial system F(y) = 0 with exact evaluation and analytic
/// Jacobian. Implementations are immutable after construction and reentrant;
/// trackers call them concurrently on private state.
class SquareSystem {
 public:
  virtual ~SquareSystem() = default;
  virtual int dim() const = 0;
  virtual void eval(const Eigen::VectorXcd& y, Eigen::VectorXcd& f) const = 0;
  virtual void jacobian(const Eigen::VectorXcd& y, Eigen::MatrixXcd& jac) const = 0;
};

/// A homotopy F(y, t) with t in [0, 1] between two members of a parametric
/// family, F(., 0) the start system and F(., 1) the end system.
class HomotopySegment {
 public:
  virtual ~HomotopySegment() = default;
  virtual int dim() const = 0;
  virtual void eval(const Eigen::VectorXcd& y, double t, Eigen::VectorXcd& f) const = 0;
  virtual void jacobian(const Eigen::VectorXcd& y, double t, Eigen::MatrixXcd& jac) const = 0;
  virtual void t_derivative(const Eigen::VectorXcd& y, double t, Eigen::VectorXcd& df) const = 0;
};

/// Straight-line homotopy for families whose residual is affine-linear in the
/// parameters: F(y, t) = (1-t) F_a(y) + t F_b(y).
class AffineBlendSegment final : public HomotopySegment {
 public:
  AffineBlendSegment(std::shared_ptr<const SquareSystem> a, std::shared_ptr<const SquareSystem> b)
      : a_(std::move(a)), b_(std::move(b)) {}

  int dim() const override { return a_->dim(); }

  void eval(const Eigen::VectorXcd& y, double t, Eigen::VectorXcd& f) const override {
    Eigen::VectorXcd fb(dim());
    a_->eval(y, f);
    b_->eval(y, fb);
    f = (1 - t) * f + t * fb;
  }

  void jacobian(const Eigen::VectorXcd& y, double t, Eigen::MatrixXcd& jac) const override {
    Eigen::MatrixXcd jb(dim(), dim());
    a_->jacobian(y, jac);
    b_->jacobian(y, jb);
    jac = (1 - t) * jac + t * jb;
  }

  void t_derivative(const Eigen::VectorXcd& y, double /*t*/, Eigen::VectorXcd& df) const override {
    Eigen::VectorXcd fa(dim());
    a_->eval(y, fa);
    b_->eval(y, df);
    df -= fa;
  }

 private:
  std::shared_ptr<const SquareSystem> a_;
  std::shared_ptr<const SquareSystem> b_;
};

/// A family of square systems over a connected parameter space, with the
/// ability to sample generic members and connect members by segments. Used by
/// the monodromy loop and by parameter homotopies to targets.
class ParametricFamily {
 public:
  virtual ~ParametricFamily() = default;
  virtual std::shared_ptr<const SquareSystem> base_system() const = 0;
  virtual std::shared_ptr<const SquareSystem> random_system(std::mt19937_64& rng) const = 0;
  virtual std::unique_ptr<HomotopySegment> segment(std::shared_ptr<const SquareSystem> from,
                                                   std::shared_ptr<const SquareSystem> to) const = 0;
};

}  // namespace ccvar
