#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "ccvar/linalg.hpp"
#include "ccvar/errors.hpp"
#include "ccvar/random.hpp"

using namespace ccvar;

TEST_CASE("lu_solve and condition estimates") {
  std::mt19937_64 rng(1);
  Eigen::MatrixXcd a = complex_gaussian_matrix(12, 12, rng);
  Eigen::VectorXcd b = complex_gaussian_vector(12, rng);
  Eigen::VectorXcd x = lu_solve(a, b);
  CHECK((a * x - b).cwiseAbs().maxCoeff() < 1e-12 * a.cwiseAbs().maxCoeff() * x.cwiseAbs().maxCoeff());

  CHECK(condition_estimate(Eigen::MatrixXcd::Identity(8, 8)) == doctest::Approx(1.0));
  Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(6, 6);
  bad(5, 5) = 1e-12;
  CHECK(condition_estimate(bad) > 1e10);
}

TEST_CASE("symmetric eigensolver contract") {
  Eigen::MatrixXd diag = Eigen::Vector3d(3, -1, 2).asDiagonal();
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
  symmetric_eigen(diag, values, vectors);
  CHECK(values[0] == doctest::Approx(-1));
  CHECK(values[1] == doctest::Approx(2));
  CHECK(values[2] == doctest::Approx(3));

  Eigen::MatrixXd swap(2, 2);
  swap << 0, 1, 1, 0;
  symmetric_eigen(swap, values, vectors);
  CHECK(values[0] == doctest::Approx(-1));
  CHECK(values[1] == doctest::Approx(1));

  std::mt19937_64 rng(2);
  Eigen::MatrixXd a = random_symmetric_real(70, rng);
  symmetric_eigen(a, values, vectors);
  double norm = a.cwiseAbs().maxCoeff();
  CHECK((a - vectors * values.asDiagonal() * vectors.transpose()).cwiseAbs().maxCoeff() < 1e-9 * norm);
  CHECK((vectors * vectors.transpose() - Eigen::MatrixXd::Identity(70, 70)).cwiseAbs().maxCoeff() < 1e-10);

  // trace and determinant cross-checks at small sizes
  for (int n = 2; n <= 8; ++n) {
    Eigen::MatrixXd s = random_symmetric_real(n, rng);
    symmetric_eigen(s, values, vectors);
    CHECK(values.sum() == doctest::Approx(s.trace()).epsilon(1e-8));
    CHECK(values.prod() == doctest::Approx(s.determinant()).epsilon(1e-8));
  }

  Eigen::MatrixXd asym(2, 2);
  asym << 0, 1, 2, 0;
  CHECK_THROWS_AS(symmetric_eigen(asym, values, vectors), InvalidInput);
}

TEST_CASE("least-norm solve") {
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(4, 4);
  std::mt19937_64 rng(3);
  Eigen::VectorXcd b = complex_gaussian_vector(4, rng);
  CHECK((least_norm_solve(id, b) - b).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::MatrixXcd m = complex_gaussian_matrix(5, 20, rng);
  Eigen::VectorXcd rhs = complex_gaussian_vector(5, rng);
  Eigen::VectorXcd x = least_norm_solve(m, rhs);
  CHECK((m * x - rhs).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(least_norm_solve(m, Eigen::VectorXcd::Zero(5)).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::MatrixXcd deficient = Eigen::MatrixXcd::Zero(3, 6);
  deficient.row(0) = complex_gaussian_vector(6, rng).transpose();
  deficient.row(1) = 2.0 * deficient.row(0);
  deficient.row(2) = complex_gaussian_vector(6, rng).transpose();
  CHECK_THROWS_AS(least_norm_solve(deficient, complex_gaussian_vector(3, rng)), NumericalFailure);
}

TEST_CASE("univariate roots") {
  // lambda^2 - 1
  auto roots = univariate_roots({Complex(-1, 0), Complex(0, 0), Complex(1, 0)});
  REQUIRE(roots.size() == 2);
  std::sort(roots.begin(), roots.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
  CHECK(std::abs(roots[0] - Complex(-1, 0)) < 1e-12);
  CHECK(std::abs(roots[1] - Complex(1, 0)) < 1e-12);

  // product of nine known linear factors
  std::vector<Complex> known;
  std::mt19937_64 rng(4);
  for (int i = 0; i < 9; ++i) known.push_back(complex_gaussian(rng));
  std::vector<Complex> coeffs{1.0};
  for (Complex r : known) {
    std::vector<Complex> next(coeffs.size() + 1, Complex(0, 0));
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      next[i + 1] += coeffs[i];
      next[i] -= r * coeffs[i];
    }
    coeffs = std::move(next);
  }
  auto found = univariate_roots(coeffs);
  REQUIRE(found.size() == 9);
  for (Complex r : known) {
    double best = 1e9;
    for (Complex f : found) best = std::min(best, std::abs(f - r));
    CHECK(best < 1e-9);
  }

  // count check at degree 55
  std::vector<Complex> big(56);
  for (auto& c : big) c = complex_gaussian(rng);
  big[55] += 2.0;  // keep the leading coefficient away from zero
  auto many = univariate_roots(big);
  CHECK(many.size() == 55);
  double scale = 0;
  for (const auto& c : big) scale += std::abs(c);
  for (Complex r : many) {
    Complex value = 0;
    for (int k = 55; k >= 0; --k) value = value * r + big[k];
    CHECK(std::abs(value) < 1e-8 * scale * std::pow(std::max(1.0, std::abs(r)), 55));
  }

  CHECK_THROWS_AS(univariate_roots({}), InvalidInput);
  CHECK_THROWS_AS(univariate_roots({Complex(0, 0), Complex(0, 0)}), InvalidInput);
}

TEST_CASE("signed maximal minors") {
  Eigen::MatrixXcd m(2, 3);
  m << 1, 0, 0, 0, 1, 0;
  Eigen::VectorXcd v = signed_maximal_minors(m);
  CHECK(std::abs(v[0]) < 1e-15);
  CHECK(std::abs(v[1]) < 1e-15);
  CHECK(std::abs(std::abs(v[2]) - 1.0) < 1e-15);

  std::mt19937_64 rng(5);
  Eigen::MatrixXcd r = complex_gaussian_matrix(5, 6, rng);
  Eigen::VectorXcd kernel = signed_maximal_minors(r);
  CHECK((r * kernel).cwiseAbs().maxCoeff() < 1e-9 * kernel.cwiseAbs().maxCoeff());

  Eigen::MatrixXcd deficient(2, 3);
  deficient.row(0) = complex_gaussian_vector(3, rng).transpose();
  deficient.row(1) = 3.0 * deficient.row(0);
  CHECK(signed_maximal_minors(deficient).cwiseAbs().maxCoeff() < 1e-12);
}
