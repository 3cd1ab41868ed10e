#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>

#include "ccvar/expparam.hpp"
#include "ccvar/random.hpp"

using namespace ccvar;

namespace {

Eigen::VectorXcd random_amplitudes(const IndexTable& t, std::mt19937_64& rng) {
  Eigen::VectorXcd x = complex_gaussian_vector(t.size(), rng);
  x[0] = 1;
  return x;
}

}  // namespace

TEST_CASE("cluster matrix at (2,5) reproduces the normative 10x10 pattern") {
  IndexTable t(2, 5);
  ExcitationStructure s(t);

  // (row set, col set) -> signed variable; everything else must be zero
  std::map<std::pair<std::vector<int>, std::vector<int>>, std::pair<int, std::vector<int>>> expected = {
      {{{1, 3}, {1, 2}}, {+1, {1, 3}}}, {{{1, 4}, {1, 2}}, {+1, {1, 4}}},
      {{{1, 5}, {1, 2}}, {+1, {1, 5}}}, {{{2, 3}, {1, 2}}, {-1, {2, 3}}},
      {{{2, 4}, {1, 2}}, {-1, {2, 4}}}, {{{2, 5}, {1, 2}}, {-1, {2, 5}}},
      {{{3, 4}, {1, 2}}, {+1, {3, 4}}}, {{{3, 5}, {1, 2}}, {+1, {3, 5}}},
      {{{4, 5}, {1, 2}}, {+1, {4, 5}}},
      {{{3, 4}, {1, 3}}, {-1, {2, 4}}}, {{{3, 4}, {1, 4}}, {+1, {2, 3}}},
      {{{3, 4}, {2, 3}}, {-1, {1, 4}}}, {{{3, 4}, {2, 4}}, {+1, {1, 3}}},
      {{{3, 5}, {1, 3}}, {-1, {2, 5}}}, {{{3, 5}, {1, 5}}, {+1, {2, 3}}},
      {{{3, 5}, {2, 3}}, {-1, {1, 5}}}, {{{3, 5}, {2, 5}}, {+1, {1, 3}}},
      {{{4, 5}, {1, 4}}, {-1, {2, 5}}}, {{{4, 5}, {1, 5}}, {+1, {2, 4}}},
      {{{4, 5}, {2, 4}}, {-1, {1, 5}}}, {{{4, 5}, {2, 5}}, {+1, {1, 4}}},
  };

  std::map<std::pair<std::vector<int>, std::vector<int>>, std::pair<int, std::vector<int>>> actual;
  for (const auto& e : s.entries()) {
    CHECK(e.row > e.col);  // strictly lower triangular in the global order
    CHECK(t.level_of(e.row) > t.level_of(e.col));
    actual[{mask_members(t.set_at(e.row)), mask_members(t.set_at(e.col))}] = {
        static_cast<int>(e.sign), mask_members(t.set_at(e.var))};
  }
  CHECK(actual.size() == 21);
  CHECK(actual == expected);
}

TEST_CASE("matrix exponential entries at (2,5)") {
  IndexTable t(2, 5);
  ExcitationStructure s(t);
  std::mt19937_64 rng(3);
  Eigen::VectorXcd x = random_amplitudes(t, rng);
  Eigen::MatrixXcd e = exp_matrix(s, x);

  auto at = [&](std::vector<int> row, std::vector<int> col) {
    return e(t.index_of(mask_from_members(row)), t.index_of(mask_from_members(col)));
  };
  auto var = [&](std::vector<int> v) { return x[t.index_of(mask_from_members(v))]; };

  CHECK(std::abs(at({3, 4}, {1, 2}) - (var({1, 4}) * var({2, 3}) - var({1, 3}) * var({2, 4}) + var({3, 4}))) < 1e-14);
  CHECK(std::abs(at({3, 5}, {1, 2}) - (var({1, 5}) * var({2, 3}) - var({1, 3}) * var({2, 5}) + var({3, 5}))) < 1e-14);
  CHECK(std::abs(at({4, 5}, {1, 2}) - (var({1, 5}) * var({2, 4}) - var({1, 4}) * var({2, 5}) + var({4, 5}))) < 1e-14);
  for (int i = 0; i < t.size(); ++i) CHECK(e(i, i) == Complex(1, 0));

  Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(t.size());
  CHECK(exp_matrix(s, zero).isIdentity(0.0));
}

TEST_CASE("exp(T(x)) exp(T(-x)) is the identity at (3,6)") {
  IndexTable t(3, 6);
  ExcitationStructure s(t);
  std::mt19937_64 rng(5);
  Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(t.size(), t.size());
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXcd x = random_amplitudes(t, rng);
    Eigen::MatrixXcd product = exp_matrix(s, x) * exp_matrix(s, (-x).eval());
    CHECK((product - id).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("nilpotency: T^{d+1} vanishes exactly") {
  std::mt19937_64 rng(7);
  for (auto [d, n] : std::vector<std::pair<int, int>>{{2, 5}, {3, 6}, {4, 8}}) {
    IndexTable t(d, n);
    ExcitationStructure s(t);
    Eigen::MatrixXcd dense = s.matrix(random_amplitudes(t, rng)).toDense();
    Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(t.size(), t.size());
    for (int k = 0; k <= d; ++k) power = power * dense;
    CHECK(power.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("forward map on the worked (3,6) point") {
  IndexTable t(3, 6);
  ExcitationStructure s(t);
  Complex a(0.3, -0.2), b(1.1, 0.4), c(-0.7, 0.9), e(0.5, 0.25);
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(t.size());
  x[0] = 1;
  x[t.index_of(mask_from_members({1, 2, 4}))] = a;
  x[t.index_of(mask_from_members({1, 3, 5}))] = b;
  x[t.index_of(mask_from_members({1, 2, 5}))] = c;
  x[t.index_of(mask_from_members({1, 3, 4}))] = e;
  Eigen::VectorXcd psi = forward(s, x);
  CHECK(std::abs(psi[t.index_of(mask_from_members({1, 4, 5}))] - (-a * b + c * e)) < 1e-14);
  CHECK(std::abs(psi[t.index_of(mask_from_members({1, 3, 4}))] - (-e)) < 1e-14);
  CHECK(std::abs(psi[t.index_of(mask_from_members({1, 2, 4}))] - a) < 1e-14);
  CHECK(psi[0] == Complex(1, 0));

  Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(t.size());
  unit[0] = 1;
  CHECK((forward(s, unit) - unit).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("top coordinate at (3,6) equals the displayed 16-term expansion") {
  IndexTable t(3, 6);
  ExcitationStructure s(t);
  std::mt19937_64 rng(9);
  auto idx = [&](int i, int j, int k) { return t.index_of(mask_from_members({i, j, k})); };
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXcd x = random_amplitudes(t, rng);
    auto v = [&](int i, int j, int k) { return x[idx(i, j, k)]; };
    Complex expected = v(4, 5, 6) + v(1, 2, 4) * v(3, 5, 6) - v(1, 2, 5) * v(3, 4, 6) +
                       v(1, 2, 6) * v(3, 4, 5) - v(1, 3, 4) * v(2, 5, 6) + v(1, 3, 5) * v(2, 4, 6) -
                       v(1, 3, 6) * v(2, 4, 5) + v(1, 4, 5) * v(2, 3, 6) - v(1, 4, 6) * v(2, 3, 5) +
                       v(1, 5, 6) * v(2, 3, 4) - v(1, 2, 4) * v(1, 3, 5) * v(2, 3, 6) +
                       v(1, 2, 4) * v(1, 3, 6) * v(2, 3, 5) + v(1, 2, 5) * v(1, 3, 4) * v(2, 3, 6) -
                       v(1, 2, 5) * v(1, 3, 6) * v(2, 3, 4) - v(1, 2, 6) * v(1, 3, 4) * v(2, 3, 5) +
                       v(1, 2, 6) * v(1, 3, 5) * v(2, 3, 4);
    Complex actual = forward(s, x)[idx(4, 5, 6)];
    CHECK(std::abs(actual - expected) < 1e-12 * (1 + std::abs(expected)));
  }
}

TEST_CASE("backward inverts forward and reproduces the displayed inversion") {
  std::mt19937_64 rng(13);
  for (auto [d, n] : std::vector<std::pair<int, int>>{{3, 6}, {2, 6}}) {
    IndexTable t(d, n);
    ExcitationStructure s(t);
    for (int trial = 0; trial < 100; ++trial) {
      Eigen::VectorXcd x = random_amplitudes(t, rng);
      Eigen::VectorXcd back = backward(s, forward(s, x));
      CHECK((back - x).cwiseAbs().maxCoeff() < 1e-11);
      Eigen::VectorXcd psi = random_amplitudes(t, rng);  // any chart point is a valid state
      Eigen::VectorXcd again = forward(s, backward(s, psi));
      CHECK((again - psi).cwiseAbs().maxCoeff() < 1e-11);
    }
  }

  IndexTable t(3, 6);
  ExcitationStructure s(t);
  auto idx = [&](int i, int j, int k) { return t.index_of(mask_from_members({i, j, k})); };
  Eigen::VectorXcd psi = random_amplitudes(t, rng);
  auto p = [&](int i, int j, int k) { return psi[idx(i, j, k)]; };
  Complex expected =
      p(4, 5, 6) - p(1, 2, 4) * p(3, 5, 6) + p(1, 2, 5) * p(3, 4, 6) - p(1, 2, 6) * p(3, 4, 5) +
      p(1, 3, 4) * p(2, 5, 6) - p(1, 3, 5) * p(2, 4, 6) + p(1, 3, 6) * p(2, 4, 5) -
      p(1, 4, 5) * p(2, 3, 6) + p(1, 4, 6) * p(2, 3, 5) - p(1, 5, 6) * p(2, 3, 4) +
      2.0 * (p(1, 2, 4) * p(1, 3, 5) * p(2, 3, 6) - p(1, 2, 4) * p(1, 3, 6) * p(2, 3, 5) -
             p(1, 2, 5) * p(1, 3, 4) * p(2, 3, 6) + p(1, 2, 5) * p(1, 3, 6) * p(2, 3, 4) +
             p(1, 2, 6) * p(1, 3, 4) * p(2, 3, 5) - p(1, 2, 6) * p(1, 3, 5) * p(2, 3, 4));
  CHECK(std::abs(backward(s, psi)[idx(4, 5, 6)] - expected) < 1e-12 * (1 + std::abs(expected)));

  psi[0] = 0;
  CHECK_THROWS_AS(backward(s, psi), InvalidInput);

  Eigen::VectorXcd unit = Eigen::VectorXcd::Zero(t.size());
  unit[0] = 1;
  CHECK((backward(s, unit) - unit).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("each coordinate is linear in its own amplitude with slope +-1") {
  IndexTable t(3, 6);
  ExcitationStructure s(t);
  std::mt19937_64 rng(17);
  Eigen::VectorXcd x = random_amplitudes(t, rng);
  Eigen::VectorXcd base = forward(s, x);
  for (int i = 1; i < t.size(); ++i) {
    Eigen::VectorXcd bumped = x;
    bumped[i] += 1.0;
    Eigen::VectorXcd once = forward(s, bumped);
    bumped[i] += 1.0;
    Eigen::VectorXcd twice = forward(s, bumped);
    Complex slope1 = once[i] - base[i];
    Complex slope2 = twice[i] - once[i];
    CHECK(std::abs(slope1 - slope2) < 1e-13);
    CHECK(std::abs(slope1 - Complex(s.epsilon(i), 0)) < 1e-13);
  }
}

TEST_CASE("jacobian of the forward map against finite differences") {
  IndexTable t(3, 6);
  ExcitationStructure s(t);
  std::mt19937_64 rng(19);
  Eigen::VectorXcd x = random_amplitudes(t, rng);
  std::vector<int> vars;
  for (int i = 1; i < t.size(); ++i) vars.push_back(i);
  Eigen::MatrixXcd jac = forward_jacobian(s, x, vars);
  double h = 1e-6;
  for (std::size_t c = 0; c < vars.size(); ++c) {
    Eigen::VectorXcd plus = x, minus = x;
    plus[vars[c]] += h;
    minus[vars[c]] -= h;
    Eigen::VectorXcd fd = (forward(s, plus) - forward(s, minus)) / (2 * h);
    CHECK((fd - jac.col(static_cast<int>(c))).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("level-one amplitudes generate the minor parametrization") {
  std::mt19937_64 rng(23);
  for (auto [d, n] : std::vector<std::pair<int, int>>{{2, 5}, {3, 6}}) {
    IndexTable t(d, n);
    ExcitationStructure s(t);
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(t.size());
    x[0] = 1;
    for (int i = t.level_begin(1); i < t.level_end(1); ++i) x[i] = complex_gaussian(rng);
    double err = 0;
    CHECK(grassmann_column_check(s, x, 1e-12, &err));
    CHECK(err < 1e-12);

    Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(t.size());
    zero[0] = 1;
    CHECK(grassmann_column_check(s, zero));

    Eigen::VectorXcd bad = x;
    bad[t.level_begin(2)] = 1;
    CHECK_THROWS_AS(grassmann_column_check(s, bad), InvalidInput);
  }
}

TEST_CASE("forward agrees with replicated master polynomials everywhere") {
  std::mt19937_64 rng(29);
  for (auto [d, n] : std::vector<std::pair<int, int>>{{3, 6}, {2, 6}}) {
    IndexTable t(d, n);
    ExcitationStructure s(t);
    std::vector<IndexTable> master_tables;
    for (int lvl = 1; lvl <= t.max_level(); ++lvl) master_tables.emplace_back(lvl, 2 * lvl);
    std::vector<SparsePolynomial> polys;
    for (int i = 1; i < t.size(); ++i)
      polys.push_back(replicate(master_forward(t.level_of(i)), master_tables[t.level_of(i) - 1], t,
                                t.set_at(i)));
    for (int trial = 0; trial < 10; ++trial) {
      Eigen::VectorXcd x = random_amplitudes(t, rng);
      Eigen::VectorXcd psi = forward(s, x);
      for (int i = 1; i < t.size(); ++i)
        CHECK(std::abs(polys[i - 1].eval(x) - psi[i]) < 1e-12 * (1 + std::abs(psi[i])));
    }
  }
}
